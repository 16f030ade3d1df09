//! Online word likelihood learning from committed input.
//!
//! Each commit of characters `C` with pinyin `P` runs, in order:
//!
//! 1. every `per` updates, cull the vocabulary to `cap`;
//! 2. add every substring of `C` up to `maxlen` characters with IWL `+= alpha`,
//!    recording its aligned pinyin span;
//! 3. segment `C` into the word sequence `S` maximising Pr[S];
//! 4. add `beta * Pr[S] + gamma` to the IWL of each word of `S`;
//! 5. count the n-grams of `S`.

use std::sync::Arc;

use thiserror::Error;

use crate::config::EngineConfig;
use crate::decoder::{kbest, Edge, LanguageModel, Lattice, Lexicon, SpanWord};
use crate::pinyin::{PinyinTable, Syllable};
use crate::vocab::{ngram_prob, NGramStore, VocabError, Vocabulary};

#[derive(Debug, Error)]
pub enum ObserveError {
    #[error("empty commit")]
    Empty,
    #[error("{chars} characters but {syllables} syllables")]
    LengthMismatch { chars: usize, syllables: usize },
    #[error("character {ch:?} at {position} cannot be read as `{syllable}`")]
    Incompatible {
        position: usize,
        ch: char,
        syllable: String,
    },
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

/// Read-only scoring view over a vocabulary and n-gram store.
#[derive(Debug, Clone, Copy)]
pub struct OnlineModel<'a> {
    pub vocab: &'a Vocabulary,
    pub store: &'a NGramStore,
    pub backoff: f64,
}

impl LanguageModel for OnlineModel<'_> {
    fn order(&self) -> usize {
        self.store.order()
    }

    fn log_prob(&self, word: &str, history: &[String]) -> f64 {
        ngram_prob(self.store, self.vocab, word, history, self.backoff).ln()
    }

    fn context_seen(&self, context: &[String]) -> bool {
        self.store.row_total(context) > 0
    }
}

impl Lexicon for OnlineModel<'_> {
    fn span_words(&self, syllables: &[Syllable]) -> Vec<SpanWord> {
        let mut out = Vec::new();
        for (len, words) in self.vocab.prefix_words(syllables) {
            for word in words {
                out.push(SpanWord {
                    len,
                    word: word.clone(),
                    emission: self.vocab.emission_prob(&syllables[..len], word),
                });
            }
        }
        out
    }
}

/// Best segmentation of `chars` into words of at most `maxlen` characters
/// under the word n-gram model, with its probability Pr[W].
pub fn segment_chars(chars: &str, model: &OnlineModel<'_>, maxlen: usize) -> (Vec<String>, f64) {
    let chars: Vec<char> = chars.chars().collect();
    if chars.is_empty() {
        return (Vec::new(), 1.0);
    }
    let mut edges = Vec::new();
    for start in 0..chars.len() {
        for len in 1..=maxlen.min(chars.len() - start) {
            let word: String = chars[start..start + len].iter().collect();
            edges.push(Edge {
                start,
                end: start + len,
                fallback: !model.vocab.contains(&word),
                word,
                log_emission: 0.0,
            });
        }
    }
    let lattice = Lattice::from_edges(chars.len(), edges);
    let best = kbest(&lattice, model, 1)
        .expect("single characters always connect the lattice")
        .paths
        .remove(0);
    let words = best.words().into_iter().map(str::to_string).collect();
    (words, best.log_score.exp())
}

/// What one [`Learner::observe`] call did.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Words removed by the culling pass, in removal order.
    pub culled: Vec<String>,
    /// Vocabulary size right after the culling pass.
    pub size_after_cull: usize,
    /// Substring occurrences added.
    pub injected: usize,
    pub segmentation: Vec<String>,
    /// Pr[W] of the segmentation.
    pub probability: f64,
    /// IWL added to each segmentation word.
    pub bonus: f64,
}

#[derive(Debug, Clone)]
pub struct Learner {
    config: EngineConfig,
    table: Arc<PinyinTable>,
    vocab: Vocabulary,
    store: NGramStore,
    updates: u64,
}

impl Learner {
    pub fn new(config: EngineConfig, table: Arc<PinyinTable>) -> Self {
        let vocab = Vocabulary::new(config.maxlen, config.epsilon).with_table(table.clone());
        let store = NGramStore::new(config.order);
        Learner {
            config,
            table,
            vocab,
            store,
            updates: 0,
        }
    }

    /// Reassembles a learner from restored parts.
    pub fn from_parts(
        config: EngineConfig,
        table: Arc<PinyinTable>,
        vocab: Vocabulary,
        store: NGramStore,
        updates: u64,
    ) -> Self {
        Learner {
            config,
            table,
            vocab,
            store,
            updates,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn table(&self) -> &Arc<PinyinTable> {
        &self.table
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn store(&self) -> &NGramStore {
        &self.store
    }

    /// Number of completed observations.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn model(&self) -> OnlineModel<'_> {
        OnlineModel {
            vocab: &self.vocab,
            store: &self.store,
            backoff: self.config.backoff,
        }
    }

    /// Checks that `pinyin` can be read off `chars` one syllable per
    /// character.
    pub fn check_alignment(&self, chars: &str, pinyin: &[Syllable]) -> Result<(), ObserveError> {
        let n = chars.chars().count();
        if n == 0 {
            return Err(ObserveError::Empty);
        }
        if n != pinyin.len() {
            return Err(ObserveError::LengthMismatch {
                chars: n,
                syllables: pinyin.len(),
            });
        }
        for (position, (ch, s)) in chars.chars().zip(pinyin).enumerate() {
            if !self.table.can_read(ch, s.as_str()) {
                return Err(ObserveError::Incompatible {
                    position,
                    ch,
                    syllable: s.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Learns from one committed input. On error nothing changes.
    pub fn observe(&mut self, chars: &str, pinyin: &[Syllable]) -> Result<Observation, ObserveError> {
        self.check_alignment(chars, pinyin)?;
        let c = &self.config;

        let culled = if self.updates.is_multiple_of(c.per) {
            self.vocab.cull(c.cap)
        } else {
            Vec::new()
        };
        let size_after_cull = self.vocab.len();

        let text: Vec<char> = chars.chars().collect();
        let mut injected = 0;
        let mut word = String::new();
        for start in 0..text.len() {
            word.clear();
            for end in start + 1..=(start + c.maxlen).min(text.len()) {
                word.push(text[end - 1]);
                self.vocab.iwl_add(&word, Some(&pinyin[start..end]), c.alpha)?;
                injected += 1;
            }
        }

        let (segmentation, probability) = segment_chars(chars, &self.model(), c.maxlen);
        let weight = if c.bonus_norm && !segmentation.is_empty() {
            probability.powf(1.0 / segmentation.len() as f64)
        } else {
            probability
        };
        let bonus = c.beta * weight + c.gamma;
        for w in &segmentation {
            self.vocab.iwl_add(w, None, bonus)?;
        }

        self.store.add_sequence(&segmentation);
        self.updates += 1;
        Ok(Observation {
            culled,
            size_after_cull,
            injected,
            segmentation,
            probability,
            bonus,
        })
    }
}
