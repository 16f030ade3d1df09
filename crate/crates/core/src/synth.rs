//! Seeded synthetic data: lexicons, MIU corpora and syllable streams.

use std::collections::{BTreeSet, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::TrainingRecord;
use crate::eval::CorpusRecord;
use crate::pinyin::{join_syllables, Inventory, PinyinTable, Syllable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthWord {
    pub text: String,
    pub pinyin: Vec<Syllable>,
}

/// `size` words of 2 to 4 characters, each character with a single reading
/// in `table` and absent from `exclude`. No character repeats and no two
/// words share a pinyin sequence.
pub fn synthetic_lexicon<R: Rng>(
    table: &PinyinTable,
    size: usize,
    exclude: &HashSet<char>,
    rng: &mut R,
) -> Vec<SynthWord> {
    let mut pool: Vec<char> = table
        .entries()
        .into_iter()
        .filter(|(c, r)| r.len() == 1 && !exclude.contains(c))
        .map(|(c, _)| c)
        .collect();
    pool.shuffle(rng);
    let mut pool = pool.into_iter();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let len = rng.gen_range(2..=4);
        let chars: Vec<char> = pool.by_ref().take(len).collect();
        assert_eq!(chars.len(), len, "character pool exhausted");
        let pinyin: Vec<Syllable> = chars.iter().map(|&c| table.readings(c)[0].clone()).collect();
        if seen.insert(join_syllables(&pinyin)) {
            out.push(SynthWord {
                text: chars.into_iter().collect(),
                pinyin,
            });
        }
    }
    out
}

/// Every character used by `lexicon`.
pub fn lexicon_chars(lexicon: &[SynthWord]) -> HashSet<char> {
    lexicon.iter().flat_map(|w| w.text.chars()).collect()
}

/// One synthetic MIU as indices into its lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthMiu {
    pub words: Vec<usize>,
}

impl SynthMiu {
    pub fn text(&self, lexicon: &[SynthWord]) -> String {
        self.words.iter().map(|&i| lexicon[i].text.as_str()).collect()
    }

    pub fn pinyin(&self, lexicon: &[SynthWord]) -> Vec<Syllable> {
        self.words.iter().flat_map(|&i| lexicon[i].pinyin.iter().cloned()).collect()
    }

    pub fn corpus_record(&self, lexicon: &[SynthWord], line: usize) -> CorpusRecord {
        CorpusRecord {
            line,
            text: self.text(lexicon),
            pinyin: Some(join_syllables(&self.pinyin(lexicon))),
        }
    }

    pub fn training_record(&self, lexicon: &[SynthWord]) -> TrainingRecord {
        TrainingRecord::new(
            self.words.iter().map(|&i| lexicon[i].text.clone()).collect(),
            self.pinyin(lexicon),
        )
        .expect("synthetic records are aligned")
    }
}

/// `count` MIUs of 1 to 3 words, drawn from a Zipf law with exponent `zipf`
/// over the lexicon order.
pub fn synthetic_mius<R: Rng>(lexicon_size: usize, count: usize, zipf: f64, rng: &mut R) -> Vec<SynthMiu> {
    let weights: Vec<f64> = (1..=lexicon_size).map(|r| (r as f64).powf(-zipf)).collect();
    let dist = WeightedIndex::new(&weights).expect("non-empty lexicon");
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            SynthMiu {
                words: (0..n).map(|_| dist.sample(rng)).collect(),
            }
        })
        .collect()
}

pub fn corpus_records(lexicon: &[SynthWord], mius: &[SynthMiu]) -> Vec<CorpusRecord> {
    mius.iter()
        .enumerate()
        .map(|(i, m)| m.corpus_record(lexicon, i + 1))
        .collect()
}

/// `len` syllables drawn uniformly from the inventory.
pub fn random_syllables<R: Rng>(inventory: &Inventory, len: usize, rng: &mut R) -> Vec<Syllable> {
    let all: Vec<&Syllable> = inventory.iter().collect();
    (0..len).map(|_| (*all.choose(rng).expect("non-empty inventory")).clone()).collect()
}

/// Number of ways `letters` splits into inventory syllables.
pub fn segmentation_count(letters: &str, inventory: &Inventory) -> u64 {
    let n = letters.len();
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for end in 1..=n {
        for start in end.saturating_sub(inventory.max_len())..end {
            if ways[start] > 0 && inventory.contains(&letters[start..end]) {
                ways[end] = ways[end].saturating_add(ways[start]);
            }
        }
    }
    ways[n]
}

/// Fewest syllables `letters` splits into, if it splits at all.
pub fn min_syllables(letters: &str, inventory: &Inventory) -> Option<usize> {
    let n = letters.len();
    let mut best = vec![None; n + 1];
    best[0] = Some(0);
    for end in 1..=n {
        for start in end.saturating_sub(inventory.max_len())..end {
            if let Some(b) = best[start] {
                if inventory.contains(&letters[start..end]) && best[end].is_none_or(|x| b + 1 < x) {
                    best[end] = Some(b + 1);
                }
            }
        }
    }
    best[n]
}

/// A closed set of syllable phrases in which the fraction `ambiguity` have
/// letter strings that split into fewer syllables than the phrase has, so
/// a fewest-syllables rule gets them wrong.
pub fn syllable_phrases<R: Rng>(inventory: &Inventory, count: usize, ambiguity: f64, rng: &mut R) -> Vec<Vec<Syllable>> {
    let mut out = Vec::with_capacity(count);
    let mut seen = BTreeSet::new();
    while out.len() < count {
        let want_ambiguous = rng.gen_bool(ambiguity);
        loop {
            let len = rng.gen_range(2..=4);
            let phrase = random_syllables(inventory, len, rng);
            let letters: String = phrase.iter().map(Syllable::as_str).collect();
            let ambiguous = min_syllables(&letters, inventory) != Some(phrase.len());
            if ambiguous == want_ambiguous {
                if seen.insert(letters) {
                    out.push(phrase);
                }
                break;
            }
        }
    }
    out
}

/// `count` sentences of 1 to 4 phrases, as syllable sequences.
pub fn phrase_sentences<R: Rng>(phrases: &[Vec<Syllable>], count: usize, rng: &mut R) -> Vec<Vec<Syllable>> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            (0..n)
                .flat_map(|_| phrases.choose(rng).expect("non-empty phrase set").iter().cloned())
                .collect()
        })
        .collect()
}
