//! Sequential replay: convert each MIU, score it, then let the engine learn.

use std::sync::Arc;

use super::corpus::CorpusRecord;
use super::score::topk_score;
use crate::baseline::OfflineModel;
use crate::decoder::{ConversionResult, DecodeError};
use crate::engine::Engine;
use crate::pinyin::{PinyinTable, Syllable};

/// Something that converts syllables and may learn from the truth.
pub trait ConversionEngine {
    fn table(&self) -> &PinyinTable;

    fn convert(&self, syllables: &[Syllable]) -> Result<ConversionResult, DecodeError>;

    /// Called with the true text after scoring. Static models ignore it.
    fn learn(&mut self, text: &str, syllables: &[Syllable]) -> Result<(), String>;
}

impl ConversionEngine for Engine {
    fn table(&self) -> &PinyinTable {
        Engine::table(self)
    }

    fn convert(&self, syllables: &[Syllable]) -> Result<ConversionResult, DecodeError> {
        self.convert_syllables(syllables)
    }

    fn learn(&mut self, text: &str, syllables: &[Syllable]) -> Result<(), String> {
        self.commit(text, syllables).map(drop).map_err(|e| e.to_string())
    }
}

/// An offline model with the candidate depth it is evaluated at.
#[derive(Debug, Clone)]
pub struct OfflineEngine {
    pub model: Arc<OfflineModel>,
    pub table: Arc<PinyinTable>,
    pub k: usize,
}

impl ConversionEngine for OfflineEngine {
    fn table(&self) -> &PinyinTable {
        &self.table
    }

    fn convert(&self, syllables: &[Syllable]) -> Result<ConversionResult, DecodeError> {
        self.model.convert(&self.table, syllables, self.k)
    }

    fn learn(&mut self, _: &str, _: &[Syllable]) -> Result<(), String> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupScore {
    pub index: usize,
    pub mius: usize,
    /// Mean score per entry of [`ScoreReport::ks`].
    pub means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub ks: Vec<usize>,
    pub group_size: usize,
    /// Mean score over all scored MIUs, per K.
    pub totals: Vec<f64>,
    pub groups: Vec<GroupScore>,
    pub scored: usize,
    pub skipped: Vec<Skipped>,
    /// Positions, in scored MIUs, where the corpus switches source.
    pub joints: Vec<usize>,
}

impl ScoreReport {
    /// Total for `k`, if it was measured.
    pub fn total(&self, k: usize) -> Option<f64> {
        self.ks.iter().position(|&x| x == k).map(|i| self.totals[i])
    }
}

/// Replays `records` in order. Each record is resolved to syllables,
/// converted, scored for every K in `ks`, and then learned. Records whose
/// pinyin is illegal, or that fail to convert, are skipped and listed.
pub fn run_simulation<E: ConversionEngine + ?Sized>(
    records: &[CorpusRecord],
    engine: &mut E,
    ks: &[usize],
    group_size: usize,
) -> ScoreReport {
    let group_size = group_size.max(1);
    let mut sums = vec![0.0; ks.len()];
    let mut groups: Vec<GroupScore> = Vec::new();
    let mut skipped = Vec::new();
    let mut scored = 0;
    for record in records {
        let syllables = match record.resolve(engine.table()) {
            Ok(s) => s,
            Err(reason) => {
                skipped.push(Skipped { line: record.line, reason });
                continue;
            }
        };
        let result = match engine.convert(&syllables) {
            Ok(r) => r,
            Err(e) => {
                skipped.push(Skipped {
                    line: record.line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let texts = result.texts();
        if scored % group_size == 0 {
            groups.push(GroupScore {
                index: groups.len(),
                mius: 0,
                means: vec![0.0; ks.len()],
            });
        }
        let group = groups.last_mut().expect("group pushed above");
        for (i, &k) in ks.iter().enumerate() {
            let s = topk_score(&texts, &record.text, k);
            group.means[i] += s;
            sums[i] += s;
        }
        group.mius += 1;
        scored += 1;
        if let Err(reason) = engine.learn(&record.text, &syllables) {
            skipped.push(Skipped { line: record.line, reason });
        }
    }
    for g in &mut groups {
        for m in &mut g.means {
            *m /= g.mius as f64;
        }
    }
    let totals = sums.iter().map(|s| if scored == 0 { 0.0 } else { s / scored as f64 }).collect();
    ScoreReport {
        ks: ks.to_vec(),
        group_size,
        totals,
        groups,
        scored,
        skipped,
        joints: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{train_offline, TrainingRecord};
    use crate::config::EngineConfig;
    use crate::eval::read_corpus;

    fn engine() -> Engine {
        Engine::new(EngineConfig::default(), Arc::new(PinyinTable::builtin())).unwrap()
    }

    #[test]
    fn second_occurrence_is_learned() {
        let records = read_corpus("北京\tbei jing\n北京\tbei jing\n".as_bytes()).unwrap();
        let report = run_simulation(&records, &mut engine(), &[1, 10], 1);
        assert_eq!(report.scored, 2);
        assert_eq!(report.groups[0].means[0], 0.0);
        assert_eq!(report.groups[1].means[0], 1.0);
    }

    #[test]
    fn skips_bad_records() {
        let records = read_corpus("北京\tbei\n北京\tbei jing\nabc\n".as_bytes()).unwrap();
        let report = run_simulation(&records, &mut engine(), &[1], 10);
        assert_eq!(report.scored, 1);
        let lines: Vec<usize> = report.skipped.iter().map(|s| s.line).collect();
        assert_eq!(lines, [1, 3]);
    }

    #[test]
    fn groups_aggregate_to_totals() {
        let text = "北京\n上海\n北京\n北京上海\n上海\n北京\n上海北京\n";
        let records = read_corpus(text.as_bytes()).unwrap();
        let report = run_simulation(&records, &mut engine(), &[1, 10], 3);
        assert_eq!(report.groups.len(), 3);
        for i in 0..2 {
            let weighted: f64 = report.groups.iter().map(|g| g.means[i] * g.mius as f64).sum();
            assert!((weighted / report.scored as f64 - report.totals[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn offline_is_stateless() {
        let table = Arc::new(PinyinTable::builtin());
        let rec = TrainingRecord::new(vec!["北京".into()], table.annotate("北京").unwrap()).unwrap();
        let model = Arc::new(train_offline(&[rec], 3).unwrap());
        let mut offline = OfflineEngine { model, table, k: 10 };
        let records = read_corpus("北京\n上海\n北京\n".as_bytes()).unwrap();
        let a = run_simulation(&records, &mut offline, &[1, 10], 2);
        let b = run_simulation(&records, &mut offline, &[1, 10], 2);
        assert_eq!(a, b);
        assert_eq!(a.groups[0].means[0], 0.5);
    }
}
