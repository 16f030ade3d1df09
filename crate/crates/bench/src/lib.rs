//! Fixtures for the engine benchmarks.

use std::collections::HashSet;
use std::sync::Arc;

use omwa_core::pinyin::{train_pinyin_lm, Inventory};
use omwa_core::synth::{phrase_sentences, rng, syllable_phrases, synthetic_lexicon, synthetic_mius, SynthMiu, SynthWord};
use omwa_core::{Engine, EngineConfig, PinyinLm, PinyinTable, Syllable};

pub struct Fixture {
    pub table: Arc<PinyinTable>,
    pub lexicon: Vec<SynthWord>,
    pub mius: Vec<SynthMiu>,
    /// An engine that has learned every MIU in `mius`.
    pub trained: Engine,
}

impl Fixture {
    pub fn new(mius: usize) -> Self {
        let table = Arc::new(PinyinTable::builtin());
        let mut r = rng(1);
        let lexicon = synthetic_lexicon(&table, 200, &HashSet::new(), &mut r);
        let mius = synthetic_mius(lexicon.len(), mius, 1.0, &mut r);
        let mut trained = Engine::new(EngineConfig::default(), table.clone()).unwrap();
        for m in &mius {
            trained.commit(&m.text(&lexicon), &m.pinyin(&lexicon)).unwrap();
        }
        Fixture {
            table,
            lexicon,
            mius,
            trained,
        }
    }

    pub fn queries(&self, n: usize) -> Vec<Vec<Syllable>> {
        self.mius.iter().take(n).map(|m| m.pinyin(&self.lexicon)).collect()
    }
}

/// A syllable trigram and raw letter strings to segment with it.
pub fn segmentation_fixture(n: usize) -> (PinyinLm, Vec<String>) {
    let inv = Inventory::builtin();
    let mut r = rng(2);
    let phrases = syllable_phrases(&inv, 300, 0.5, &mut r);
    let lm = train_pinyin_lm(phrase_sentences(&phrases, 3000, &mut r), &inv).unwrap();
    let inputs = phrase_sentences(&phrases, n, &mut r)
        .iter()
        .map(|s| s.iter().map(Syllable::as_str).collect())
        .collect();
    (lm, inputs)
}
