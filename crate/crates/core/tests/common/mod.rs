//! Brute-force oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::sync::Arc;

use omwa_core::decoder::{LanguageModel, Lattice};
use omwa_core::pinyin::{load_pinyin_table, PinyinTable, Syllable};
use omwa_core::{NGramStore, OnlineModel, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct OraclePath {
    pub words: Vec<String>,
    pub score: f64,
}

impl OraclePath {
    pub fn text(&self) -> String {
        self.words.concat()
    }
}

/// Scores `words` left to right with the full history cut to `order - 1`.
pub fn score_words<M: LanguageModel>(model: &M, words: &[String], emissions: f64) -> f64 {
    let keep = model.order().saturating_sub(1);
    let mut score = emissions;
    for (i, w) in words.iter().enumerate() {
        let from = i.saturating_sub(keep);
        score += model.log_prob(w, &words[from..i]);
    }
    score
}

/// Every path from node 0 to `end`, by depth-first expansion.
pub fn enumerate_paths<M: LanguageModel>(lattice: &Lattice, model: &M, end: usize) -> Vec<OraclePath> {
    fn walk<M: LanguageModel>(
        lattice: &Lattice,
        model: &M,
        end: usize,
        node: usize,
        words: &mut Vec<String>,
        emission: f64,
        out: &mut Vec<OraclePath>,
    ) {
        if node == end {
            out.push(OraclePath {
                words: words.clone(),
                score: score_words(model, words, emission),
            });
            return;
        }
        for &id in lattice.outgoing(node) {
            let e = lattice.edge(id);
            if e.end > end {
                continue;
            }
            words.push(e.word.clone());
            walk(lattice, model, end, e.end, words, emission + e.log_emission, out);
            words.pop();
        }
    }
    let mut out = Vec::new();
    walk(lattice, model, end, 0, &mut Vec::new(), 0.0, &mut out);
    out.sort_by(rank);
    out
}

pub fn rank(a: &OraclePath, b: &OraclePath) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.words.len().cmp(&b.words.len()))
        .then_with(|| a.text().cmp(&b.text()))
}

/// Best split of `chars` into pieces of at most `maxlen` characters over all
/// `2^(L-1)` compositions.
pub fn brute_segment(chars: &str, model: &OnlineModel<'_>, maxlen: usize) -> (Vec<String>, f64) {
    let chars: Vec<char> = chars.chars().collect();
    let n = chars.len();
    let mut best: Option<OraclePath> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut words = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || mask & (1 << (i - 1)) != 0 {
                words.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        if words.iter().any(|w| w.chars().count() > maxlen) {
            continue;
        }
        let cand = OraclePath {
            score: score_words(model, &words, 0.0),
            words,
        };
        if best.as_ref().is_none_or(|b| rank(&cand, b) == Ordering::Less) {
            best = Some(cand);
        }
    }
    let best = best.expect("single characters always fit");
    (best.words, best.score.exp())
}

pub const SMALL_SYLLABLES: [&str; 4] = ["ba", "bi", "da", "di"];

/// Eight characters over four syllables, two of them with two readings.
pub fn small_table() -> Arc<PinyinTable> {
    let text = "八\tba\n巴\tba,bi\n比\tbi\n笔\tbi\n大\tda\n打\tda,di\n地\tdi\n弟\tdi\n";
    Arc::new(load_pinyin_table(text.as_bytes()).unwrap())
}

pub fn syl(s: &str) -> Syllable {
    Syllable::new(s).unwrap()
}

/// A random vocabulary of at most 8 words with random IWLs and pinyin
/// counts, a random n-gram store, and a random query of 1 to 6 syllables.
pub struct Instance {
    pub table: Arc<PinyinTable>,
    pub vocab: Vocabulary,
    pub store: NGramStore,
    pub query: Vec<Syllable>,
}

impl Instance {
    pub fn model(&self) -> OnlineModel<'_> {
        OnlineModel {
            vocab: &self.vocab,
            store: &self.store,
            backoff: 0.4,
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let table = small_table();
    let chars: Vec<char> = table.entries().into_iter().map(|(c, _)| c).collect();
    let mut vocab = Vocabulary::new(3, 1e-8).with_table(table.clone());
    let mut words = Vec::new();
    for _ in 0..rng.gen_range(1..=8) {
        let len = rng.gen_range(1..=3);
        let word: String = (0..len).map(|_| *chars.choose(rng).unwrap()).collect();
        let reading: Vec<Syllable> = word
            .chars()
            .map(|c| table.readings(c).choose(rng).unwrap().clone())
            .collect();
        let weight = rng.gen_range(0.1..20.0);
        let pinyin = rng.gen_bool(0.7).then_some(reading.as_slice());
        vocab.iwl_add(&word, pinyin, weight).unwrap();
        words.push(word);
    }
    let mut store = NGramStore::new(rng.gen_range(1..=4));
    for _ in 0..rng.gen_range(0..6) {
        let seq: Vec<&String> = (0..rng.gen_range(1..=4)).map(|_| words.choose(rng).unwrap()).collect();
        store.add_sequence(&seq);
    }
    let query = (0..rng.gen_range(1..=6))
        .map(|_| syl(SMALL_SYLLABLES.choose(rng).unwrap()))
        .collect();
    Instance {
        table,
        vocab,
        store,
        query,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// Compares k-best search on `inst` against exhaustive enumeration: full
/// paths, best prefix conversions and the ranked first-span words.
pub fn check_against_oracle(inst: &Instance, k: usize) -> Result<(), String> {
    use omwa_core::decoder::{build_lattice, kbest, viterbi_best, FallbackPolicy};
    let model = inst.model();
    let lattice =
        build_lattice(&inst.query, &model, &inst.table, FallbackPolicy::Always).map_err(|e| e.to_string())?;
    let m = lattice.len();
    let all = enumerate_paths(&lattice, &model, m);
    let got = kbest(&lattice, &model, k).map_err(|e| e.to_string())?;
    let want = &all[..k.min(all.len())];
    if got.paths.len() != want.len() {
        return Err(format!("{} paths, oracle has {}", got.paths.len(), want.len()));
    }
    for (i, (p, o)) in got.paths.iter().zip(want).enumerate() {
        if !close(p.log_score, o.score) {
            return Err(format!("path {i}: score {} vs oracle {}", p.log_score, o.score));
        }
        let words: Vec<String> = p.words().iter().map(|w| w.to_string()).collect();
        let emission: f64 = p
            .segments
            .iter()
            .map(|s| {
                lattice
                    .edges()
                    .iter()
                    .find(|e| e.start == s.start && e.end == s.end && e.word == s.word)
                    .expect("segment is a lattice edge")
                    .log_emission
            })
            .sum();
        if !close(score_words(&model, &words, emission), p.log_score) {
            return Err(format!("path {i} score does not match its words"));
        }
    }
    let texts: Vec<(Vec<String>, usize)> = got
        .paths
        .iter()
        .map(|p| (p.words().iter().map(|w| w.to_string()).collect(), p.segments.len()))
        .collect();
    for i in 0..texts.len() {
        for j in i + 1..texts.len() {
            if texts[i] == texts[j] && got.paths[i].segments == got.paths[j].segments {
                return Err("duplicate path".into());
            }
        }
    }
    let best = viterbi_best(&lattice, &model).map_err(|e| e.to_string())?;
    if !close(best.log_score, all[0].score) {
        return Err("viterbi_best disagrees".into());
    }
    for j in 1..m {
        let oracle = enumerate_paths(&lattice, &model, j);
        match (&got.prefixes[j], oracle.first()) {
            (Some(p), Some(o)) if close(p.log_score, o.score) => {}
            (None, None) => {}
            (p, o) => {
                return Err(format!(
                    "prefix {j}: {:?} vs {:?}",
                    p.as_ref().map(|p| p.log_score),
                    o.map(|o| o.score)
                ))
            }
        }
    }
    let mut first: Vec<f64> = lattice
        .outgoing(0)
        .iter()
        .map(|&id| {
            let e = lattice.edge(id);
            e.log_emission + model.log_prob(&e.word, &[])
        })
        .collect();
    first.sort_by(|a, b| b.total_cmp(a));
    let got_first: Vec<f64> = got.first_span.iter().map(|p| p.log_score).collect();
    if first.len() != got_first.len() || first.iter().zip(&got_first).any(|(a, b)| !close(*a, *b)) {
        return Err("first-span words disagree".into());
    }
    Ok(())
}
