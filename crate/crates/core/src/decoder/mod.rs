//! Lattice decoding of syllable sequences into words.
//!
//! The score of a path `w_1 .. w_m` over spans `p_1 .. p_m` is
//! `Σ ln Pr[p_i | w_i] + ln Pr[w_i | w_(i-n+1) .. w_(i-1)]`. The search is an
//! exact dynamic program whose state is the part of the word history the
//! language model can still distinguish.

mod candidates;
mod lattice;
mod search;

use thiserror::Error;

use crate::pinyin::{PinyinTable, Syllable};

pub use candidates::{make_candidates, Candidate, ConversionResult};
pub use lattice::{build_lattice, Edge, FallbackPolicy, Lattice};
pub use search::{kbest, viterbi_best, Decoding, Path, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("empty syllable sequence")]
    EmptyInput,
    #[error("syllable `{syllable}` at position {position} has no characters")]
    Unconvertible { syllable: String, position: usize },
    #[error("no conversion covers the whole input")]
    NoPath,
}

/// Left-to-right word probabilities.
///
/// `history` holds the preceding words, oldest first, already truncated to
/// at most `order() - 1` entries. Implementations must give identical scores
/// to any two histories of equal length whose longest suffix with
/// `context_seen` agrees; the search merges such histories.
pub trait LanguageModel {
    fn order(&self) -> usize;

    fn log_prob(&self, word: &str, history: &[String]) -> f64;

    /// Whether `context` has ever been followed by a word.
    fn context_seen(&self, context: &[String]) -> bool;
}

/// A word readable as the first `len` syllables of a query.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanWord {
    pub len: usize,
    pub word: String,
    pub emission: f64,
}

/// Source of word edges for the lattice.
pub trait Lexicon {
    /// Words readable as some prefix of `syllables`, with Pr[pinyin | word].
    fn span_words(&self, syllables: &[Syllable]) -> Vec<SpanWord>;
}

/// Builds the lattice, runs k-best search with `k` and assembles at most
/// `k` candidates.
pub fn convert<M: LanguageModel + Lexicon>(
    syllables: &[Syllable],
    model: &M,
    table: &PinyinTable,
    policy: FallbackPolicy,
    k: usize,
    alt_margin: f64,
) -> Result<ConversionResult, DecodeError> {
    let lattice = build_lattice(syllables, model, table, policy)?;
    let decoding = kbest(&lattice, model, k)?;
    Ok(make_candidates(&decoding, k, alt_margin))
}
