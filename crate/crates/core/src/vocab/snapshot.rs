//! Plain-text vocabulary and n-gram dumps.
//!
//! Vocabulary lines are `<word>\t<iwl>\t<pinyin>:<count>[,...]`, sorted by
//! word. N-gram lines are `<w1> <w2> ...\t<count>`, sorted by word sequence.
//! IWL values use the shortest representation that parses back to the same
//! `f64`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{ImeWord, NGramStore, VocabError, Vocabulary};

pub fn write_vocab<W: Write>(vocab: &Vocabulary, mut out: W) -> std::io::Result<()> {
    for word in vocab.sorted_entries() {
        write!(out, "{}\t{}\t", word.text, word.iwl)?;
        for (i, (pinyin, count)) in word.pinyin_counts.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{pinyin}:{count}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Reads entries into `vocab`. The cached total is rebuilt by summing the
/// entries in file order.
pub fn read_vocab<R: BufRead>(source: R, vocab: &mut Vocabulary) -> Result<(), VocabError> {
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| VocabError::Malformed {
            line: i + 1,
            reason: reason.to_string(),
        };
        let mut fields = line.split('\t');
        let (Some(text), Some(iwl), pinyin, None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(malformed("expected `<word>\\t<iwl>\\t<pinyin:count,...>`"));
        };
        let len = text.chars().count();
        if len == 0 || len > vocab.maxlen() {
            return Err(malformed("word is empty or longer than maxlen"));
        }
        let iwl: f64 = iwl.parse().map_err(|_| malformed("IWL is not a number"))?;
        if !iwl.is_finite() || iwl < 0.0 {
            return Err(malformed("IWL must be a non-negative number"));
        }
        let mut pinyin_counts = BTreeMap::new();
        for item in pinyin.unwrap_or("").split(',').filter(|s| !s.is_empty()) {
            let (key, count) = item
                .rsplit_once(':')
                .ok_or_else(|| malformed("pinyin entry lacks `:count`"))?;
            let count: u64 = count.parse().map_err(|_| malformed("bad pinyin count"))?;
            if key.split(' ').any(|s| crate::pinyin::Syllable::new(s).is_err()) {
                return Err(malformed("bad pinyin syllables"));
            }
            pinyin_counts.insert(key.to_string(), count);
        }
        vocab.restore(ImeWord {
            text: text.to_string(),
            iwl,
            pinyin_counts,
        });
    }
    Ok(())
}

pub fn write_ngrams<W: Write>(store: &NGramStore, mut out: W) -> std::io::Result<()> {
    for (gram, count) in store.sorted_entries() {
        writeln!(out, "{}\t{count}", gram.join(" "))?;
    }
    out.flush()
}

pub fn read_ngrams<R: BufRead>(source: R, order: usize) -> Result<NGramStore, VocabError> {
    let mut store = NGramStore::new(order);
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| VocabError::Malformed {
            line: i + 1,
            reason: reason.to_string(),
        };
        let (gram, count) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected `<words>\\t<count>`"))?;
        let count: u64 = count.parse().map_err(|_| malformed("bad count"))?;
        let mut words: Vec<String> = gram.split(' ').map(str::to_string).collect();
        if words.iter().any(String::is_empty) || words.len() > order {
            return Err(malformed("n-gram is empty or longer than the store order"));
        }
        let last = words.pop().expect("non-empty");
        store.add_count(words, &last, count);
    }
    Ok(store)
}
