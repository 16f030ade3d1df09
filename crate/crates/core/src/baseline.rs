//! Offline word n-gram conversion models trained on a segmented,
//! pinyin-annotated corpus, with raw count ratios and a fixed vocabulary.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoder::{convert, ConversionResult, DecodeError, FallbackPolicy, LanguageModel, Lexicon, SpanWord};
use crate::pinyin::{join_syllables, Inventory, PinyinTable, Syllable};
use crate::vocab::{backoff_prob, NGramStore, SyllableTrie};

/// Unigram probability given to table characters outside the vocabulary.
pub const FALLBACK_UNIGRAM: f64 = 1e-12;
/// Multiplier for each skipped history level.
pub const OFFLINE_BACKOFF: f64 = 0.4;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("empty training corpus")]
    EmptyCorpus,
    #[error("order must be 1, 2 or 3, got {0}")]
    BadOrder(usize),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
}

/// One training sentence: words and the syllables they are read as.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRecord {
    pub words: Vec<String>,
    pub pinyin: Vec<Syllable>,
}

impl TrainingRecord {
    /// Checks that the syllable count equals the character count.
    pub fn new(words: Vec<String>, pinyin: Vec<Syllable>) -> Result<Self, String> {
        if words.is_empty() || words.iter().any(String::is_empty) {
            return Err("empty word".into());
        }
        let chars: usize = words.iter().map(|w| w.chars().count()).sum();
        if chars != pinyin.len() {
            return Err(format!("{chars} characters but {} syllables", pinyin.len()));
        }
        Ok(TrainingRecord { words, pinyin })
    }

    /// Each word with its syllable span.
    pub fn aligned(&self) -> impl Iterator<Item = (&str, &[Syllable])> {
        let mut at = 0;
        self.words.iter().map(move |w| {
            let n = w.chars().count();
            let span = &self.pinyin[at..at + n];
            at += n;
            (w.as_str(), span)
        })
    }

    /// The `<w1> <w2> ...\t<syl1> <syl2> ...` line form.
    pub fn to_line(&self) -> String {
        format!("{}\t{}", self.words.join(" "), join_syllables(&self.pinyin))
    }
}

/// Reads `<w1> <w2> ...\t<syl1> <syl2> ...` lines, skipping blank ones.
pub fn read_training<R: BufRead>(source: R, inventory: &Inventory) -> Result<Vec<TrainingRecord>, BaselineError> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| BaselineError::Malformed { line: i + 1, reason };
        let (words, pinyin) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected `<words>\\t<syllables>`".into()))?;
        let words = words.split_whitespace().map(str::to_string).collect();
        let pinyin = pinyin
            .split_whitespace()
            .map(|s| {
                inventory
                    .get(s)
                    .ok_or_else(|| malformed(format!("unknown syllable `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(TrainingRecord::new(words, pinyin).map_err(malformed)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct OfflineModel {
    store: NGramStore,
    /// Word → pinyin → count.
    emissions: BTreeMap<String, BTreeMap<String, u64>>,
    emission_totals: HashMap<String, u64>,
    index: SyllableTrie,
    max_word_len: usize,
    tokens: u64,
}

/// Collects 1- to `order`-gram counts and emission counts.
pub fn train_offline<'a, I>(records: I, order: usize) -> Result<OfflineModel, BaselineError>
where
    I: IntoIterator<Item = &'a TrainingRecord>,
{
    if !(1..=3).contains(&order) {
        return Err(BaselineError::BadOrder(order));
    }
    let mut store = NGramStore::new(order);
    let mut emissions: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    for record in records {
        store.add_sequence(&record.words);
        for (word, span) in record.aligned() {
            *emissions
                .entry(word.to_string())
                .or_default()
                .entry(join_syllables(span))
                .or_default() += 1;
        }
    }
    if emissions.is_empty() {
        return Err(BaselineError::EmptyCorpus);
    }
    Ok(OfflineModel::from_counts(store, emissions))
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    order: usize,
    ngrams: Vec<(Vec<String>, u64)>,
    emissions: BTreeMap<String, BTreeMap<String, u64>>,
}

impl OfflineModel {
    fn from_counts(store: NGramStore, emissions: BTreeMap<String, BTreeMap<String, u64>>) -> Self {
        let mut index = SyllableTrie::new();
        let mut emission_totals = HashMap::new();
        let mut max_word_len = 0;
        for (word, readings) in &emissions {
            for pinyin in readings.keys() {
                let path: Vec<Syllable> = pinyin
                    .split(' ')
                    .map(|s| Syllable::new(s).expect("stored syllables are valid"))
                    .collect();
                max_word_len = max_word_len.max(path.len());
                index.insert(&path, word);
            }
            emission_totals.insert(word.clone(), readings.values().sum());
        }
        let tokens = store.row_total(&[]);
        OfflineModel {
            store,
            emissions,
            emission_totals,
            index,
            max_word_len,
            tokens,
        }
    }

    pub fn order(&self) -> usize {
        self.store.order()
    }

    pub fn store(&self) -> &NGramStore {
        &self.store
    }

    pub fn vocab_len(&self) -> usize {
        self.emissions.len()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.emissions.contains_key(word)
    }

    /// count(word) / tokens, or [`FALLBACK_UNIGRAM`] for unseen words.
    pub fn unigram(&self, word: &str) -> f64 {
        match self.store.count(&[word]) {
            0 => FALLBACK_UNIGRAM,
            c => c as f64 / self.tokens as f64,
        }
    }

    pub fn emission(&self, pinyin: &[Syllable], word: &str) -> f64 {
        let Some(readings) = self.emissions.get(word) else {
            return 0.0;
        };
        let count = readings.get(&join_syllables(pinyin)).copied().unwrap_or(0);
        count as f64 / self.emission_totals[word] as f64
    }

    pub fn convert(&self, table: &PinyinTable, syllables: &[Syllable], k: usize) -> Result<ConversionResult, DecodeError> {
        convert_offline(self, table, syllables, k)
    }

    pub fn save<W: Write>(&self, out: W) -> Result<(), BaselineError> {
        let file = ModelFile {
            order: self.order(),
            ngrams: self.store.sorted_entries(),
            emissions: self.emissions.clone(),
        };
        serde_json::to_writer(out, &file)?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self, BaselineError> {
        let file: ModelFile = serde_json::from_reader(source)?;
        if !(1..=3).contains(&file.order) {
            return Err(BaselineError::BadOrder(file.order));
        }
        if file.emissions.is_empty() {
            return Err(BaselineError::EmptyCorpus);
        }
        let mut store = NGramStore::new(file.order);
        for (mut gram, count) in file.ngrams {
            let Some(word) = gram.pop() else { continue };
            store.add_count(gram, &word, count);
        }
        for (word, readings) in &file.emissions {
            let bad = readings.keys().any(|p| p.split(' ').any(|s| Syllable::new(s).is_err()));
            if bad {
                return Err(BaselineError::Malformed {
                    line: 0,
                    reason: format!("bad pinyin for `{word}`"),
                });
            }
        }
        Ok(OfflineModel::from_counts(store, file.emissions))
    }
}

impl LanguageModel for OfflineModel {
    fn order(&self) -> usize {
        self.store.order()
    }

    fn log_prob(&self, word: &str, history: &[String]) -> f64 {
        backoff_prob(&self.store, word, history, OFFLINE_BACKOFF, || self.unigram(word)).ln()
    }

    fn context_seen(&self, context: &[String]) -> bool {
        self.store.row_total(context) > 0
    }
}

impl Lexicon for OfflineModel {
    fn span_words(&self, syllables: &[Syllable]) -> Vec<SpanWord> {
        let mut out = Vec::new();
        for (len, words) in self.index.prefixes(syllables, self.max_word_len) {
            for word in words {
                out.push(SpanWord {
                    len,
                    word: word.clone(),
                    emission: self.emission(&syllables[..len], word),
                });
            }
        }
        out
    }
}

/// Converts with the shared decoder; table characters are added only at
/// syllables where no vocabulary word starts.
pub fn convert_offline(
    model: &OfflineModel,
    table: &PinyinTable,
    syllables: &[Syllable],
    k: usize,
) -> Result<ConversionResult, DecodeError> {
    convert(
        syllables,
        model,
        table,
        FallbackPolicy::Uncovered,
        k,
        crate::config::EngineConfig::default().alt_margin,
    )
}
