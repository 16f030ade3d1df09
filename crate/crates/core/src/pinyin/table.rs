use std::collections::HashMap;
use std::io::BufRead;

use super::{Inventory, PinyinError, Syllable};

const BUILTIN_TABLE: &str = include_str!("../../data/char_pinyin.tsv");

/// Bidirectional character/syllable conversion table.
///
/// Reading lists keep the order in which they first appear in the source,
/// so the first listed reading of a character is stable.
#[derive(Debug, Clone)]
pub struct PinyinTable {
    char_to_syllables: HashMap<char, Vec<Syllable>>,
    syllable_to_chars: HashMap<Syllable, Vec<char>>,
    inventory: Inventory,
}

/// Loads a UTF-8 TSV table, one `<char>\t<syll>[,<syll>...]` line per
/// character. The inventory is the set of syllables the table mentions.
pub fn load_pinyin_table<R: BufRead>(source: R) -> Result<PinyinTable, PinyinError> {
    PinyinTable::load(source, None)
}

impl PinyinTable {
    /// Loads a table, optionally checking every syllable against `inventory`.
    /// A supplied inventory is kept whole, so it may contain syllables with no
    /// characters.
    pub fn load<R: BufRead>(source: R, inventory: Option<&Inventory>) -> Result<Self, PinyinError> {
        let mut char_to_syllables: HashMap<char, Vec<Syllable>> = HashMap::new();
        for (i, line) in source.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |reason: String| PinyinError::Malformed { line: line_no, reason };
            let (ch, rest) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected `<char>\\t<syllables>`".into()))?;
            let mut chars = ch.chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(malformed(format!("`{ch}` is not a single character"))),
            };
            let readings = char_to_syllables.entry(c).or_default();
            let mut any = false;
            for text in rest.split(',') {
                let text = text.trim();
                if text.is_empty() {
                    continue;
                }
                let syllable = Syllable::new(text)
                    .map_err(|_| malformed(format!("`{text}` is not a lowercase syllable")))?;
                if let Some(inv) = inventory {
                    if !inv.contains(text) {
                        return Err(malformed(format!("`{text}` is not in the syllable inventory")));
                    }
                }
                any = true;
                if !readings.contains(&syllable) {
                    readings.push(syllable);
                }
            }
            if !any {
                return Err(malformed(format!("no syllables listed for `{c}`")));
            }
        }
        if char_to_syllables.is_empty() {
            return Err(PinyinError::Empty);
        }
        Ok(Self::from_map(char_to_syllables, inventory.cloned()))
    }

    /// The bundled GB2312 character table with the bundled inventory.
    pub fn builtin() -> Self {
        Self::load(BUILTIN_TABLE.as_bytes(), Some(&Inventory::builtin()))
            .expect("bundled pinyin table is valid")
    }

    /// Builds a table from `(char, readings)` pairs; handy for small fixtures.
    pub fn from_entries<I, S>(entries: I) -> Result<Self, PinyinError>
    where
        I: IntoIterator<Item = (char, S)>,
        S: AsRef<str>,
    {
        let mut text = String::new();
        for (c, readings) in entries {
            text.push(c);
            text.push('\t');
            text.push_str(readings.as_ref());
            text.push('\n');
        }
        load_pinyin_table(text.as_bytes())
    }

    fn from_map(char_to_syllables: HashMap<char, Vec<Syllable>>, inventory: Option<Inventory>) -> Self {
        let mut sorted: Vec<_> = char_to_syllables.iter().collect();
        sorted.sort_by_key(|(c, _)| **c);
        let mut syllable_to_chars: HashMap<Syllable, Vec<char>> = HashMap::new();
        for (c, readings) in sorted {
            for s in readings {
                syllable_to_chars.entry(s.clone()).or_default().push(*c);
            }
        }
        let inventory = inventory
            .unwrap_or_else(|| Inventory::from_syllables(syllable_to_chars.keys().cloned()));
        PinyinTable {
            char_to_syllables,
            syllable_to_chars,
            inventory,
        }
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    /// Readings of `c`, first listed first. Empty for unknown characters.
    pub fn readings(&self, c: char) -> &[Syllable] {
        self.char_to_syllables.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Characters readable as `syllable`, in code point order.
    pub fn chars(&self, syllable: &str) -> &[char] {
        self.syllable_to_chars
            .get(syllable)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn contains_char(&self, c: char) -> bool {
        self.char_to_syllables.contains_key(&c)
    }

    pub fn can_read(&self, c: char, syllable: &str) -> bool {
        self.readings(c).iter().any(|s| s.as_str() == syllable)
    }

    pub fn char_count(&self) -> usize {
        self.char_to_syllables.len()
    }

    /// Iterates `(char, readings)` in code point order.
    pub fn entries(&self) -> Vec<(char, &[Syllable])> {
        let mut out: Vec<_> = self
            .char_to_syllables
            .iter()
            .map(|(c, r)| (*c, r.as_slice()))
            .collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// True when `word` can be read as `syllables`, one syllable per character.
    pub fn is_producible<S: AsRef<str>>(&self, word: &str, syllables: &[S]) -> bool {
        let mut n = 0;
        for (c, s) in word.chars().zip(syllables) {
            if !self.can_read(c, s.as_ref()) {
                return false;
            }
            n += 1;
        }
        n == syllables.len() && n == word.chars().count()
    }

    /// Number of distinct syllable sequences `word` can be read as.
    pub fn reading_count(&self, word: &str) -> u64 {
        word.chars()
            .map(|c| self.readings(c).len() as u64)
            .try_fold(1u64, |acc, n| if n == 0 { None } else { acc.checked_mul(n) })
            .unwrap_or(0)
    }

    /// All readings of `word` in odometer order, or `None` when there are more
    /// than `limit` or some character is unknown.
    pub fn derive_readings(&self, word: &str, limit: usize) -> Option<Vec<Vec<Syllable>>> {
        let count = self.reading_count(word);
        if count == 0 || count > limit as u64 {
            return None;
        }
        let mut out: Vec<Vec<Syllable>> = vec![Vec::new()];
        for c in word.chars() {
            let readings = self.readings(c);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    readings.iter().map(move |s| {
                        let mut next = prefix.clone();
                        next.push(s.clone());
                        next
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Each character's first listed reading; `None` if any character is
    /// missing from the table.
    pub fn annotate(&self, text: &str) -> Option<Vec<Syllable>> {
        text.chars().map(|c| self.readings(c).first().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_inverts() {
        let table = load_pinyin_table("北\tbei\n背\tbei\n京\tjing\n".as_bytes()).unwrap();
        assert_eq!(table.readings('北'), &[Syllable::new("bei").unwrap()]);
        assert_eq!(table.chars("bei"), &['北', '背']);
        assert_eq!(table.chars("jing"), &['京']);
        assert!(table.inventory().contains("bei"));
    }

    #[test]
    fn duplicate_lines_merge() {
        let table = load_pinyin_table("行\txing\n行\thang,xing\n".as_bytes()).unwrap();
        let r: Vec<_> = table.readings('行').iter().map(|s| s.as_str()).collect();
        assert_eq!(r, ["xing", "hang"]);
        assert_eq!(table.chars("hang"), &['行']);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(load_pinyin_table("".as_bytes()), Err(PinyinError::Empty)));
        let err = load_pinyin_table("北\tbei\n京jing\n".as_bytes()).unwrap_err();
        assert!(matches!(err, PinyinError::Malformed { line: 2, .. }), "{err}");
        let err = load_pinyin_table("北\tbei\n京\tJing\n".as_bytes()).unwrap_err();
        assert!(matches!(err, PinyinError::Malformed { line: 2, .. }));
        let err = load_pinyin_table("北京\tbei\n".as_bytes()).unwrap_err();
        assert!(matches!(err, PinyinError::Malformed { line: 1, .. }));
    }

    #[test]
    fn inventory_check() {
        let inv = Inventory::from_syllables([Syllable::new("bei").unwrap()]);
        assert!(PinyinTable::load("北\tbei\n".as_bytes(), Some(&inv)).is_ok());
        assert!(PinyinTable::load("京\tjing\n".as_bytes(), Some(&inv)).is_err());
    }

    #[test]
    fn builtin_round_trip_closure() {
        let table = PinyinTable::builtin();
        assert!(table.char_count() > 6000);
        for (c, readings) in table.entries() {
            assert!(!readings.is_empty());
            for s in readings {
                assert!(table.chars(s.as_str()).contains(&c));
                assert!(table.inventory().contains(s.as_str()));
            }
        }
        assert!(table.chars("bei").contains(&'北'));
        assert!(table.chars("bei").contains(&'背'));
        assert!(table.chars("jing").contains(&'京'));
    }

    #[test]
    fn word_readings() {
        let table = load_pinyin_table("行\txing,hang\n北\tbei\n".as_bytes()).unwrap();
        assert_eq!(table.reading_count("北行"), 2);
        assert_eq!(table.reading_count("北x"), 0);
        let all = table.derive_readings("行行", 8).unwrap();
        assert_eq!(all.len(), 4);
        assert!(table.derive_readings("行行", 3).is_none());
        assert!(table.is_producible("北行", &["bei", "hang"]));
        assert!(!table.is_producible("北行", &["bei"]));
        assert!(!table.is_producible("北行", &["bei", "jing"]));
        assert_eq!(table.annotate("行北").unwrap()[0].as_str(), "xing");
    }
}
