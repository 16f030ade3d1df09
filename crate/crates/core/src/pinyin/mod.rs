//! Pinyin syllables, the character/syllable conversion table, syllable
//! segmentation and the syllable trigram model used to rank segmentations.

mod lm;
mod segment;
mod table;

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lm::{train_pinyin_lm, PinyinLm, Token, KN_DISCOUNT};
pub use segment::{segment_pinyin, SegmentError};
pub use table::{load_pinyin_table, PinyinTable};

/// Errors raised while loading pinyin data or training the syllable model.
#[derive(Debug, Error)]
pub enum PinyinError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("input contains no entries")]
    Empty,
    #[error("invalid syllable `{0}`")]
    InvalidSyllable(String),
    #[error("syllable `{0}` is not in the inventory")]
    UnknownSyllable(String),
}

/// One toneless pinyin syllable, e.g. `bei` or `zhuang`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Syllable(Arc<str>);

impl Syllable {
    /// Checks lexical shape only (non-empty lowercase ASCII). Membership in
    /// an inventory is checked by [`Inventory::get`].
    pub fn new(text: &str) -> Result<Self, PinyinError> {
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(PinyinError::InvalidSyllable(text.to_string()));
        }
        Ok(Syllable(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Borrow<str> for Syllable {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Syllable {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Syllable {
    type Error = PinyinError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Syllable::new(&value)
    }
}

impl From<Syllable> for String {
    fn from(value: Syllable) -> Self {
        value.0.to_string()
    }
}

/// Joins syllables with single spaces, the key format used for pinyin
/// co-occurrence counts and corpus files.
pub fn join_syllables<S: AsRef<str>>(syllables: &[S]) -> String {
    let mut out = String::new();
    for (i, s) in syllables.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(s.as_ref());
    }
    out
}

/// Parses a space separated syllable list, checking each against `inventory`.
pub fn parse_syllables(text: &str, inventory: &Inventory) -> Result<Vec<Syllable>, PinyinError> {
    text.split_whitespace()
        .map(|s| {
            inventory
                .get(s)
                .ok_or_else(|| PinyinError::UnknownSyllable(s.to_string()))
        })
        .collect()
}

/// The set of legal syllables.
#[derive(Debug, Clone, Default)]
pub struct Inventory {
    syllables: BTreeSet<Syllable>,
    max_len: usize,
}

const BUILTIN_SYLLABLES: &str = include_str!("../../data/syllables.txt");

impl Inventory {
    /// Reads one syllable per line. Blank lines are skipped.
    pub fn load<R: BufRead>(reader: R) -> Result<Self, PinyinError> {
        let mut inventory = Inventory::default();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let syllable = Syllable::new(text).map_err(|_| PinyinError::Malformed {
                line: i + 1,
                reason: format!("`{text}` is not a lowercase ASCII syllable"),
            })?;
            inventory.insert(syllable);
        }
        if inventory.is_empty() {
            return Err(PinyinError::Empty);
        }
        Ok(inventory)
    }

    /// The bundled inventory of toneless Mandarin syllables.
    pub fn builtin() -> Self {
        Self::load(BUILTIN_SYLLABLES.as_bytes()).expect("bundled syllable inventory is valid")
    }

    pub fn from_syllables<I: IntoIterator<Item = Syllable>>(syllables: I) -> Self {
        let mut inventory = Inventory::default();
        for s in syllables {
            inventory.insert(s);
        }
        inventory
    }

    fn insert(&mut self, syllable: Syllable) {
        self.max_len = self.max_len.max(syllable.len());
        self.syllables.insert(syllable);
    }

    pub fn get(&self, text: &str) -> Option<Syllable> {
        self.syllables.get(text).cloned()
    }

    pub fn contains(&self, text: &str) -> bool {
        self.syllables.contains(text)
    }

    /// Length in letters of the longest syllable.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Syllables in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Syllable> {
        self.syllables.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syllable_shape() {
        assert!(Syllable::new("bei").is_ok());
        assert!(Syllable::new("").is_err());
        assert!(Syllable::new("Bei").is_err());
        assert!(Syllable::new("bei1").is_err());
    }

    #[test]
    fn builtin_inventory() {
        let inv = Inventory::builtin();
        assert!(inv.len() > 400);
        assert_eq!(inv.max_len(), 6);
        for s in ["a", "bei", "jing", "zhuang", "lv", "xian", "xi", "an"] {
            assert!(inv.contains(s), "{s}");
        }
    }

    #[test]
    fn inventory_rejects_garbage() {
        let err = Inventory::load("bei\nJing\n".as_bytes()).unwrap_err();
        assert!(matches!(err, PinyinError::Malformed { line: 2, .. }));
        assert!(matches!(Inventory::load("\n\n".as_bytes()), Err(PinyinError::Empty)));
    }
}
