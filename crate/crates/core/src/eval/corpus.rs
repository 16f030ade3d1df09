//! Corpus files: UTF-8 lines `<MIU>[\t<syl1> <syl2> ...]`.

use std::io::{self, BufRead, Write};

use super::miu::extract_mius;
use crate::pinyin::{join_syllables, PinyinTable, Syllable};

/// One corpus line, with its pinyin left unparsed so that bad annotations
/// can be reported per record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    /// 1-based line number in the source file.
    pub line: usize,
    pub text: String,
    pub pinyin: Option<String>,
}

impl CorpusRecord {
    /// The record's syllables: the annotation checked against `table`, or
    /// the first reading of each character when there is none.
    pub fn resolve(&self, table: &PinyinTable) -> Result<Vec<Syllable>, String> {
        let Some(pinyin) = &self.pinyin else {
            return table
                .annotate(&self.text)
                .ok_or_else(|| "text has characters missing from the table".to_string());
        };
        let syllables = pinyin
            .split_whitespace()
            .map(|s| {
                table
                    .inventory()
                    .get(s)
                    .ok_or_else(|| format!("unknown syllable `{s}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chars = self.text.chars().count();
        if chars != syllables.len() {
            return Err(format!("{chars} characters but {} syllables", syllables.len()));
        }
        if let Some((c, s)) = self.text.chars().zip(&syllables).find(|(c, s)| !table.can_read(*c, s.as_str())) {
            return Err(format!("`{c}` cannot be read as `{s}`"));
        }
        Ok(syllables)
    }
}

/// Reads corpus lines, skipping blank ones.
pub fn read_corpus<R: BufRead>(source: R) -> io::Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (text, pinyin) = match line.split_once('\t') {
            Some((t, p)) => (t, Some(p.trim().to_string())),
            None => (line, None),
        };
        out.push(CorpusRecord {
            line: i + 1,
            text: text.trim().to_string(),
            pinyin,
        });
    }
    Ok(out)
}

pub fn write_corpus<W: Write, S: AsRef<str>>(records: &[(S, Vec<Syllable>)], mut out: W) -> io::Result<()> {
    for (text, syllables) in records {
        writeln!(out, "{}\t{}", text.as_ref(), join_syllables(syllables))?;
    }
    out.flush()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrepareStats {
    pub lines: usize,
    pub mius: usize,
    /// MIUs dropped because a character is missing from the table.
    pub dropped: usize,
}

/// Extracts the MIUs of raw text and writes them annotated with first
/// readings.
pub fn prepare_corpus<R: BufRead, W: Write>(source: R, table: &PinyinTable, mut out: W) -> io::Result<PrepareStats> {
    let mut stats = PrepareStats::default();
    for line in source.lines() {
        let line = line?;
        stats.lines += 1;
        for miu in extract_mius(&line) {
            match table.annotate(&miu.text) {
                Some(syllables) => {
                    writeln!(out, "{}\t{}", miu.text, join_syllables(&syllables))?;
                    stats.mius += 1;
                }
                None => stats.dropped += 1,
            }
        }
    }
    out.flush()?;
    Ok(stats)
}
