use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use super::{PinyinLm, PinyinTable, Syllable, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("empty pinyin input")]
    Empty,
    #[error("unexpected character {ch:?} at byte {offset}")]
    InvalidChar { offset: usize, ch: char },
    #[error("no syllable segmentation for `{span}` at byte {offset}")]
    Unsegmentable { offset: usize, span: String },
}

struct Letters<'a> {
    text: Vec<u8>,
    /// Byte offset in the raw input of each letter.
    raw_offset: Vec<usize>,
    /// `forced[i]` marks a user boundary before letter `i`.
    forced: Vec<bool>,
    inventory: &'a super::Inventory,
}

impl Letters<'_> {
    fn syllable_at(&self, start: usize, len: usize) -> Option<&str> {
        let end = start + len;
        if end > self.text.len() || (start + 1..end).any(|b| self.forced[b]) {
            return None;
        }
        let s = std::str::from_utf8(&self.text[start..end]).ok()?;
        self.inventory.contains(s).then_some(s)
    }

    /// Syllable lengths that can start at `start`, longest first.
    fn lengths_at(&self, start: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.inventory.max_len())
            .rev()
            .filter(move |&len| self.syllable_at(start, len).is_some())
    }
}

/// Splits raw pinyin letters into syllables.
///
/// Apostrophes force a boundary and are dropped. With `lm`, the segmentation
/// with the highest trigram score (including the end-of-sequence term) wins;
/// without it, the one with the fewest syllables, ties going to the longest
/// leftmost syllable.
pub fn segment_pinyin(
    raw: &str,
    lm: Option<&PinyinLm>,
    table: &PinyinTable,
) -> Result<Vec<Syllable>, SegmentError> {
    let letters = parse(raw, table)?;
    let n = letters.text.len();

    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for i in 0..n {
        if reach[i] {
            for len in letters.lengths_at(i) {
                reach[i + len] = true;
            }
        }
    }
    if !reach[n] {
        let stuck = (0..n).rev().find(|&i| reach[i]).unwrap_or(0);
        let end = (stuck + 1..n).find(|&b| letters.forced[b]).unwrap_or(n);
        return Err(SegmentError::Unsegmentable {
            offset: letters.raw_offset[stuck],
            span: String::from_utf8_lossy(&letters.text[stuck..end]).into_owned(),
        });
    }

    let lengths = match lm.and_then(|lm| best_by_lm(&letters, lm)) {
        Some(lengths) => lengths,
        None => fewest_syllables(&letters),
    };
    let mut out = Vec::with_capacity(lengths.len());
    let mut pos = 0;
    for len in lengths {
        let s = letters.syllable_at(pos, len).expect("segmentation uses legal syllables");
        out.push(table.inventory().get(s).expect("syllable in inventory"));
        pos += len;
    }
    Ok(out)
}

fn parse<'a>(raw: &str, table: &'a PinyinTable) -> Result<Letters<'a>, SegmentError> {
    let mut letters = Letters {
        text: Vec::with_capacity(raw.len()),
        raw_offset: Vec::with_capacity(raw.len()),
        forced: vec![false],
        inventory: table.inventory(),
    };
    for (offset, ch) in raw.char_indices() {
        match ch {
            'a'..='z' => {
                letters.text.push(ch as u8);
                letters.raw_offset.push(offset);
                letters.forced.push(false);
            }
            '\'' => {
                if let Some(last) = letters.forced.last_mut() {
                    *last = true;
                }
            }
            _ => return Err(SegmentError::InvalidChar { offset, ch }),
        }
    }
    if letters.text.is_empty() {
        return Err(SegmentError::Empty);
    }
    Ok(letters)
}

fn fewest_syllables(letters: &Letters<'_>) -> Vec<usize> {
    let n = letters.text.len();
    let mut cost = vec![usize::MAX; n + 1];
    let mut choice = vec![0usize; n + 1];
    cost[n] = 0;
    for i in (0..n).rev() {
        // Longest first, strict improvement only: the longest syllable among
        // the minimal ones is kept.
        for len in letters.lengths_at(i) {
            let rest = cost[i + len];
            if rest != usize::MAX && rest + 1 < cost[i] {
                cost[i] = rest + 1;
                choice[i] = len;
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        out.push(choice[i]);
        i += choice[i];
    }
    out
}

#[derive(Clone)]
struct Hyp {
    score: f64,
    lengths: Vec<usize>,
}

/// Higher score, then fewer syllables, then longer leading syllables.
fn better(a: &Hyp, b: &Hyp) -> bool {
    match a.score.partial_cmp(&b.score) {
        Some(Ordering::Greater) => return true,
        Some(Ordering::Less) => return false,
        _ => {}
    }
    match a.lengths.len().cmp(&b.lengths.len()) {
        Ordering::Less => return true,
        Ordering::Greater => return false,
        Ordering::Equal => {}
    }
    a.lengths > b.lengths
}

fn best_by_lm(letters: &Letters<'_>, lm: &PinyinLm) -> Option<Vec<usize>> {
    let n = letters.text.len();
    let mut chart: Vec<BTreeMap<(Token, Token), Hyp>> = vec![BTreeMap::new(); n + 1];
    chart[0].insert(
        (Token::BOS, Token::BOS),
        Hyp {
            score: 0.0,
            lengths: Vec::new(),
        },
    );
    for i in 0..n {
        if chart[i].is_empty() {
            continue;
        }
        let states = std::mem::take(&mut chart[i]);
        for len in letters.lengths_at(i) {
            let Some(w) = letters.syllable_at(i, len).and_then(|s| lm.token(s)) else {
                continue;
            };
            for (&(u, v), hyp) in &states {
                let mut next = hyp.clone();
                next.score += lm.log_prob(u, v, w);
                next.lengths.push(len);
                let slot = chart[i + len].entry((v, w));
                match slot {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(next);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        if better(&next, e.get()) {
                            e.insert(next);
                        }
                    }
                }
            }
        }
        chart[i] = states;
    }
    let mut best: Option<Hyp> = None;
    for (&(u, v), hyp) in &chart[n] {
        let mut done = hyp.clone();
        done.score += lm.log_prob(u, v, Token::EOS);
        if best.as_ref().is_none_or(|b| better(&done, b)) {
            best = Some(done);
        }
    }
    best.filter(|b| b.score.is_finite()).map(|b| b.lengths)
}
