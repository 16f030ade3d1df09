//! The dynamic vocabulary of IME words and the estimators built on it.
//!
//! Every word carries an IME word likelihood (IWL) and the pinyin sequences it
//! has been observed with. Unigram probabilities are IWL ratios; higher order
//! probabilities are count ratios from an [`NGramStore`] with a fixed backoff
//! multiplier for unseen events.

mod ngram;
mod snapshot;
mod trie;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::pinyin::{join_syllables, PinyinTable, Syllable};

pub use ngram::{NGramStore, Row};
pub use snapshot::{read_ngrams, read_vocab, write_ngrams, write_vocab};
pub use trie::SyllableTrie;

/// Words with more table readings than this are indexed under their
/// observed pinyin only.
pub const DERIVED_READING_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("negative weight {0}")]
    NegativeWeight(f64),
    #[error("word probability undefined: vocabulary has zero total weight")]
    EmptyDistribution,
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// One vocabulary entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ImeWord {
    pub text: String,
    pub iwl: f64,
    /// Observed pinyin (space joined syllables) → co-occurrence count.
    pub pinyin_counts: BTreeMap<String, u64>,
}

impl ImeWord {
    pub fn observations(&self) -> u64 {
        self.pinyin_counts.values().sum()
    }
}

/// What [`Vocabulary::iwl_add`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Inserted,
    Updated,
    /// Empty or longer than `maxlen`; the vocabulary is unchanged.
    Ignored,
}

/// Compensated running sum, so the cached total tracks the true sum closely
/// and evolves identically for identical operation sequences.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningTotal {
    pub sum: f64,
    pub compensation: f64,
}

impl RunningTotal {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone)]
pub struct Vocabulary {
    entries: HashMap<String, ImeWord>,
    index: SyllableTrie,
    total: RunningTotal,
    maxlen: usize,
    epsilon: f64,
    table: Option<Arc<PinyinTable>>,
}

impl Vocabulary {
    pub fn new(maxlen: usize, epsilon: f64) -> Self {
        Vocabulary {
            entries: HashMap::new(),
            index: SyllableTrie::new(),
            total: RunningTotal::default(),
            maxlen,
            epsilon,
            table: None,
        }
    }

    /// Attaches a conversion table. New words are then also indexed under
    /// every reading the table allows, and emissions of words without
    /// observations fall back to uniform over those readings.
    pub fn with_table(mut self, table: Arc<PinyinTable>) -> Self {
        self.table = Some(table);
        self
    }

    pub fn table(&self) -> Option<&Arc<PinyinTable>> {
        self.table.as_ref()
    }

    pub fn maxlen(&self) -> usize {
        self.maxlen
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&ImeWord> {
        self.entries.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// IWL of `word`; zero for words not in the vocabulary.
    pub fn iwl(&self, word: &str) -> f64 {
        self.entries.get(word).map_or(0.0, |w| w.iwl)
    }

    /// Cached Σ IWL.
    pub fn iwl_total(&self) -> f64 {
        self.total.value()
    }

    pub fn running_total(&self) -> RunningTotal {
        self.total
    }

    /// Replaces the cached total, e.g. when restoring a snapshot that
    /// recorded it.
    pub fn set_running_total(&mut self, total: RunningTotal) {
        self.total = total;
    }

    /// Σ IWL recomputed from the entries in word order.
    pub fn recompute_total(&self) -> f64 {
        let mut words: Vec<_> = self.entries.values().collect();
        words.sort_by(|a, b| a.text.cmp(&b.text));
        let mut total = RunningTotal::default();
        for w in words {
            total.add(w.iwl);
        }
        total.value()
    }

    /// Entries sorted by text.
    pub fn sorted_entries(&self) -> Vec<&ImeWord> {
        let mut out: Vec<_> = self.entries.values().collect();
        out.sort_by(|a, b| a.text.cmp(&b.text));
        out
    }

    /// Adds `delta` to the IWL of `word`, creating it if needed. When
    /// `pinyin` is given the call counts as one observation of the word with
    /// that reading.
    pub fn iwl_add(
        &mut self,
        word: &str,
        pinyin: Option<&[Syllable]>,
        delta: f64,
    ) -> Result<AddOutcome, VocabError> {
        if !delta.is_finite() || delta < 0.0 {
            return Err(VocabError::NegativeWeight(delta));
        }
        let len = word.chars().count();
        if len == 0 || len > self.maxlen {
            return Ok(AddOutcome::Ignored);
        }
        let outcome = if self.entries.contains_key(word) {
            AddOutcome::Updated
        } else {
            self.entries.insert(
                word.to_string(),
                ImeWord {
                    text: word.to_string(),
                    iwl: 0.0,
                    pinyin_counts: BTreeMap::new(),
                },
            );
            self.index_derived(word);
            AddOutcome::Inserted
        };
        let entry = self.entries.get_mut(word).expect("entry exists");
        entry.iwl += delta;
        self.total.add(delta);
        if let Some(pinyin) = pinyin.filter(|p| !p.is_empty()) {
            let key = join_syllables(pinyin);
            let count = entry.pinyin_counts.entry(key).or_insert(0);
            *count += 1;
            if *count == 1 {
                self.index.insert(pinyin, word);
            }
        }
        Ok(outcome)
    }

    /// Restores an entry verbatim. Used by snapshot import.
    pub(crate) fn restore(&mut self, word: ImeWord) {
        if let Some(old) = self.entries.remove(&word.text) {
            self.total.add(-old.iwl);
            self.unindex(&old);
        }
        self.index_derived(&word.text);
        for key in word.pinyin_counts.keys() {
            self.index.insert(&parse_key(key), &word.text);
        }
        self.total.add(word.iwl);
        self.entries.insert(word.text.clone(), word);
    }

    fn index_derived(&mut self, word: &str) {
        if let Some(table) = &self.table {
            if let Some(readings) = table.derive_readings(word, DERIVED_READING_LIMIT) {
                for r in readings {
                    self.index.insert(&r, word);
                }
            }
        }
    }

    fn unindex(&mut self, word: &ImeWord) {
        for key in word.pinyin_counts.keys() {
            self.index.remove(&parse_key(key), &word.text);
        }
        if let Some(table) = &self.table {
            if let Some(readings) = table.derive_readings(&word.text, DERIVED_READING_LIMIT) {
                for r in readings {
                    self.index.remove(&r, &word.text);
                }
            }
        }
    }

    /// Removes lowest-IWL words until at most `cap` remain. Ties go to the
    /// longer word, then to the lexicographically smaller one. Returns the
    /// removed words in removal order.
    pub fn cull(&mut self, cap: usize) -> Vec<String> {
        if self.entries.len() <= cap {
            return Vec::new();
        }
        let excess = self.entries.len() - cap;
        let mut ranked: Vec<(&str, f64, usize)> = self
            .entries
            .values()
            .map(|w| (w.text.as_str(), w.iwl, w.text.chars().count()))
            .collect();
        let removal_order = |a: &(&str, f64, usize), b: &(&str, f64, usize)| {
            a.1.total_cmp(&b.1)
                .then_with(|| b.2.cmp(&a.2))
                .then_with(|| a.0.cmp(b.0))
        };
        if excess < ranked.len() {
            ranked.select_nth_unstable_by(excess - 1, removal_order);
            ranked.truncate(excess);
        }
        ranked.sort_by(removal_order);
        let doomed: Vec<String> = ranked.into_iter().map(|(w, _, _)| w.to_string()).collect();
        for word in &doomed {
            let entry = self.entries.remove(word).expect("ranked word exists");
            self.total.add(-entry.iwl);
            self.unindex(&entry);
        }
        doomed
    }

    /// Pr[w] = IWL(w) / Σ IWL. With `floor`, words without weight get
    /// epsilon instead and an empty vocabulary is not an error.
    pub fn word_prob(&self, word: &str, floor: bool) -> Result<f64, VocabError> {
        let total = self.iwl_total();
        let iwl = self.iwl(word);
        if total > 0.0 && iwl > 0.0 {
            return Ok(iwl / total);
        }
        if floor {
            Ok(self.epsilon)
        } else if total > 0.0 {
            Ok(0.0)
        } else {
            Err(VocabError::EmptyDistribution)
        }
    }

    /// Pr[p | w]: observed co-occurrence ratio, or uniform over the table
    /// readings when the word has no observations. Zero when the table rules
    /// the reading out.
    pub fn emission_prob<S: AsRef<str>>(&self, pinyin: &[S], word: &str) -> f64 {
        if let Some(table) = &self.table {
            if !table.is_producible(word, pinyin) {
                return 0.0;
            }
        }
        match self.entries.get(word) {
            Some(entry) if !entry.pinyin_counts.is_empty() => {
                let key = join_syllables(pinyin);
                let count = entry.pinyin_counts.get(&key).copied().unwrap_or(0);
                count as f64 / entry.observations() as f64
            }
            _ => match &self.table {
                Some(table) => match table.reading_count(word) {
                    0 => 0.0,
                    n => 1.0 / n as f64,
                },
                None => 0.0,
            },
        }
    }

    /// Words readable as exactly `span`.
    pub fn lookup_by_pinyin<S: AsRef<str>>(&self, span: &[S]) -> BTreeSet<String> {
        if span.is_empty() {
            return BTreeSet::new();
        }
        self.index.get(span).cloned().unwrap_or_default()
    }

    /// Words readable as each prefix of `syllables`, up to `maxlen` deep.
    pub fn prefix_words<'a, S: AsRef<str>>(&'a self, syllables: &[S]) -> Vec<(usize, &'a BTreeSet<String>)> {
        self.index.prefixes(syllables, self.maxlen)
    }

    /// The `m` heaviest words, IWL descending then text ascending.
    pub fn top_words(&self, m: usize) -> Vec<(String, f64)> {
        let mut all: Vec<_> = self.entries.values().map(|w| (w.text.clone(), w.iwl)).collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        all.truncate(m);
        all
    }
}

fn parse_key(key: &str) -> Vec<Syllable> {
    key.split(' ')
        .filter_map(|s| Syllable::new(s).ok())
        .collect()
}

/// Pr[word | history] from n-gram count ratios.
///
/// The longest usable suffix of `history` (at most `order - 1` words) whose
/// row contains `word` gives the ratio; each suffix skipped multiplies by
/// `backoff`. The empty history uses the floored IWL unigram.
pub fn ngram_prob(
    store: &NGramStore,
    vocab: &Vocabulary,
    word: &str,
    history: &[String],
    backoff: f64,
) -> f64 {
    backoff_prob(store, word, history, backoff, || {
        vocab
            .word_prob(word, true)
            .expect("floored word probability is always defined")
    })
}

/// The backoff walk of [`ngram_prob`] with a caller-supplied unigram.
pub fn backoff_prob(
    store: &NGramStore,
    word: &str,
    history: &[String],
    backoff: f64,
    unigram: impl FnOnce() -> f64,
) -> f64 {
    let keep = store.order().saturating_sub(1).min(history.len());
    let history = &history[history.len() - keep..];
    let mut factor = 1.0;
    for start in 0..history.len() {
        if let Some(row) = store.row(&history[start..]) {
            let c = row.count(word);
            if c > 0 && row.total() > 0 {
                return factor * c as f64 / row.total() as f64;
            }
        }
        factor *= backoff;
    }
    factor * unigram()
}
