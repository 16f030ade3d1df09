use std::collections::HashSet;

use super::{DecodeError, Lexicon};
use crate::pinyin::{PinyinTable, Syllable};

/// When single-character edges from the conversion table are added.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackPolicy {
    /// At every syllable.
    Always,
    /// Only at syllables where no lexicon word starts.
    Uncovered,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub start: usize,
    pub end: usize,
    pub word: String,
    pub log_emission: f64,
    /// Came from the conversion table rather than the lexicon.
    pub fallback: bool,
}

/// Word edges over syllable boundaries `0..=m`.
#[derive(Debug, Clone)]
pub struct Lattice {
    len: usize,
    /// Empty for lattices not built from pinyin, e.g. character lattices.
    syllables: Vec<Syllable>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
}

impl Lattice {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Index of the final node.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids leaving `node`, ordered by end node then word.
    pub fn outgoing(&self, node: usize) -> &[usize] {
        &self.outgoing[node]
    }

    /// Builds a lattice over nodes `0..=len` from explicit edges, each
    /// spanning at least one position.
    pub fn from_edges(len: usize, edges: Vec<Edge>) -> Self {
        let m = len;
        let mut outgoing = vec![Vec::new(); m + 1];
        for (id, e) in edges.iter().enumerate() {
            assert!(e.start < e.end && e.end <= m, "edge outside lattice");
            outgoing[e.start].push(id);
        }
        for list in &mut outgoing {
            list.sort_by(|&a, &b| {
                let (a, b) = (&edges[a], &edges[b]);
                a.end.cmp(&b.end).then_with(|| a.word.cmp(&b.word))
            });
        }
        Lattice {
            len,
            syllables: Vec::new(),
            edges,
            outgoing,
        }
    }

    /// Whether some path joins node 0 to the final node.
    pub fn is_connected(&self) -> bool {
        let m = self.len();
        let mut reach = vec![false; m + 1];
        reach[0] = true;
        for node in 0..m {
            if reach[node] {
                for &e in &self.outgoing[node] {
                    reach[self.edges[e].end] = true;
                }
            }
        }
        reach[m]
    }
}

/// Builds the lattice for `syllables`: one edge per lexicon word matching a
/// span with non-zero emission, plus single-character table edges with
/// emission uniform over each character's readings, placed per `policy`.
/// A table character already present as a word on the same syllable is not
/// duplicated.
pub fn build_lattice<L: Lexicon + ?Sized>(
    syllables: &[Syllable],
    lexicon: &L,
    table: &PinyinTable,
    policy: FallbackPolicy,
) -> Result<Lattice, DecodeError> {
    if syllables.is_empty() {
        return Err(DecodeError::EmptyInput);
    }
    let m = syllables.len();
    let mut edges = Vec::new();
    let mut has_word = vec![false; m];
    let mut single_words: HashSet<(usize, String)> = HashSet::new();
    for start in 0..m {
        for sw in lexicon.span_words(&syllables[start..]) {
            if sw.len == 0 || start + sw.len > m || sw.emission.is_nan() || sw.emission <= 0.0 {
                continue;
            }
            has_word[start] = true;
            if sw.len == 1 {
                single_words.insert((start, sw.word.clone()));
            }
            edges.push(Edge {
                start,
                end: start + sw.len,
                word: sw.word,
                log_emission: sw.emission.ln(),
                fallback: false,
            });
        }
    }
    for (start, syllable) in syllables.iter().enumerate() {
        if policy == FallbackPolicy::Uncovered && has_word[start] {
            continue;
        }
        let chars = table.chars(syllable.as_str());
        if chars.is_empty() {
            return Err(DecodeError::Unconvertible {
                syllable: syllable.to_string(),
                position: start,
            });
        }
        for &c in chars {
            let word = c.to_string();
            if single_words.contains(&(start, word.clone())) {
                continue;
            }
            let readings = table.readings(c).len().max(1);
            edges.push(Edge {
                start,
                end: start + 1,
                word,
                log_emission: -(readings as f64).ln(),
                fallback: true,
            });
        }
    }
    let mut lattice = Lattice::from_edges(m, edges);
    lattice.syllables = syllables.to_vec();
    if !lattice.is_connected() {
        return Err(DecodeError::NoPath);
    }
    Ok(lattice)
}
