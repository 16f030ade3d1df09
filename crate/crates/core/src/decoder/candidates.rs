use std::collections::HashSet;

use serde::Serialize;

use super::{Decoding, Path};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub text: String,
    pub log_score: f64,
    /// Syllables consumed from the start of the input.
    pub syllables: usize,
}

/// Ranked candidate list for one input.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConversionResult {
    pub candidates: Vec<Candidate>,
}

impl ConversionResult {
    pub fn texts(&self) -> Vec<&str> {
        self.candidates.iter().map(|c| c.text.as_str()).collect()
    }

    pub fn top(&self) -> Option<&Candidate> {
        self.candidates.first()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Assembles at most `k` candidates, deduplicated by text:
///
/// 1. full conversions from the k-best list, the best always and the others
///    while within `alt_margin` (natural log) of it;
/// 2. for each proper prefix, longest first, its best conversion when that
///    conversion uses lexicon words only;
/// 3. single words over the first span, best first.
pub fn make_candidates(decoding: &Decoding, k: usize, alt_margin: f64) -> ConversionResult {
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    let mut push = |path: &Path, candidates: &mut Vec<Candidate>| {
        let text = path.text();
        if seen.insert(text.clone()) {
            candidates.push(Candidate {
                text,
                log_score: path.log_score,
                syllables: path.end(),
            });
        }
    };
    if let Some(best) = decoding.paths.first() {
        for path in &decoding.paths {
            if best.log_score - path.log_score <= alt_margin {
                push(path, &mut candidates);
            }
        }
    }
    for path in decoding.prefixes.iter().rev().flatten() {
        if !path.uses_fallback() {
            push(path, &mut candidates);
        }
    }
    for path in &decoding.first_span {
        if candidates.len() >= k {
            break;
        }
        push(path, &mut candidates);
    }
    candidates.truncate(k);
    ConversionResult { candidates }
}
