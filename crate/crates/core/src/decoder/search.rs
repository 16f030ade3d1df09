use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{DecodeError, LanguageModel, Lattice};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub word: String,
    pub start: usize,
    pub end: usize,
    pub fallback: bool,
}

/// A word sequence through the lattice with its log score.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub segments: Vec<Segment>,
    pub log_score: f64,
}

impl Path {
    pub fn text(&self) -> String {
        self.segments.iter().map(|s| s.word.as_str()).collect()
    }

    pub fn words(&self) -> Vec<&str> {
        self.segments.iter().map(|s| s.word.as_str()).collect()
    }

    /// Number of syllables covered.
    pub fn end(&self) -> usize {
        self.segments.last().map_or(0, |s| s.end)
    }

    pub fn uses_fallback(&self) -> bool {
        self.segments.iter().any(|s| s.fallback)
    }
}

/// Output of [`kbest`].
#[derive(Debug, Clone)]
pub struct Decoding {
    /// Best full paths, best first.
    pub paths: Vec<Path>,
    /// `prefixes[j]` is the best path over the first `j` syllables
    /// (`prefixes[0]` and `prefixes[m]` are `None`).
    pub prefixes: Vec<Option<Path>>,
    /// Every edge leaving node 0 as a one-word path, best first.
    pub first_span: Vec<Path>,
}

#[derive(Debug, Clone)]
struct Hyp {
    score: f64,
    edges: Vec<usize>,
    text: String,
}

/// Higher score, then fewer words, then smaller text.
fn rank(a: &Hyp, b: &Hyp) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.edges.len().cmp(&b.edges.len()))
        .then_with(|| a.text.cmp(&b.text))
}

/// Search state: how many history words are held, and the longest suffix of
/// them the model has seen as a context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct StateKey {
    held: usize,
    seen: Vec<String>,
}

fn state_key<M: LanguageModel + ?Sized>(model: &M, history: &[String]) -> StateKey {
    let seen = (0..history.len())
        .map(|start| &history[start..])
        .find(|ctx| model.context_seen(ctx))
        .map(|ctx| ctx.to_vec())
        .unwrap_or_default();
    StateKey {
        held: history.len(),
        seen,
    }
}

fn push_bounded(list: &mut Vec<Hyp>, hyp: Hyp, k: usize) -> bool {
    if list.len() == k && rank(&hyp, list.last().expect("k >= 1")) != Ordering::Less {
        return false;
    }
    let at = list.partition_point(|h| rank(h, &hyp) == Ordering::Less);
    list.insert(at, hyp);
    list.truncate(k);
    true
}

fn to_path(lattice: &Lattice, hyp: &Hyp) -> Path {
    Path {
        segments: hyp
            .edges
            .iter()
            .map(|&id| {
                let e = lattice.edge(id);
                Segment {
                    word: e.word.clone(),
                    start: e.start,
                    end: e.end,
                    fallback: e.fallback,
                }
            })
            .collect(),
        log_score: hyp.score,
    }
}

/// The `k` best distinct full paths, best first, together with the best
/// prefix conversions and the ranked first-span words.
pub fn kbest<M: LanguageModel + ?Sized>(
    lattice: &Lattice,
    model: &M,
    k: usize,
) -> Result<Decoding, DecodeError> {
    let k = k.max(1);
    let m = lattice.len();
    let keep = model.order().saturating_sub(1);
    let mut chart: Vec<BTreeMap<StateKey, Vec<Hyp>>> = vec![BTreeMap::new(); m + 1];
    chart[0].insert(
        StateKey {
            held: 0,
            seen: Vec::new(),
        },
        vec![Hyp {
            score: 0.0,
            edges: Vec::new(),
            text: String::new(),
        }],
    );
    let mut prefixes: Vec<Option<Path>> = vec![None; m + 1];
    let mut first_span = Vec::new();

    for node in 0..m {
        let states = std::mem::take(&mut chart[node]);
        if node > 0 {
            prefixes[node] = states
                .values()
                .filter_map(|hyps| hyps.first())
                .min_by(|a, b| rank(a, b))
                .map(|h| to_path(lattice, h));
        }
        for hyps in states.values() {
            let rep = &hyps[0];
            let held = rep.edges.len().min(keep);
            let mut history: Vec<String> = rep.edges[rep.edges.len() - held..]
                .iter()
                .map(|&id| lattice.edge(id).word.clone())
                .collect();
            for &id in lattice.outgoing(node) {
                let edge = lattice.edge(id);
                let delta = edge.log_emission + model.log_prob(&edge.word, &history);
                history.push(edge.word.clone());
                let drop = history.len().saturating_sub(keep);
                let key = state_key(model, &history[drop..]);
                history.pop();
                let slot = chart[edge.end].entry(key).or_default();
                for hyp in hyps {
                    let mut next = hyp.clone();
                    next.score += delta;
                    next.edges.push(id);
                    next.text.push_str(&edge.word);
                    if node == 0 {
                        first_span.push(next.clone());
                    }
                    if !push_bounded(slot, next, k) {
                        break;
                    }
                }
            }
        }
    }

    let mut finals: Vec<Hyp> = std::mem::take(&mut chart[m]).into_values().flatten().collect();
    if finals.is_empty() {
        return Err(DecodeError::NoPath);
    }
    finals.sort_by(rank);
    finals.truncate(k);
    first_span.sort_by(rank);
    Ok(Decoding {
        paths: finals.iter().map(|h| to_path(lattice, h)).collect(),
        prefixes,
        first_span: first_span.iter().map(|h| to_path(lattice, h)).collect(),
    })
}

/// The single best full path.
pub fn viterbi_best<M: LanguageModel + ?Sized>(lattice: &Lattice, model: &M) -> Result<Path, DecodeError> {
    kbest(lattice, model, 1)?
        .paths
        .into_iter()
        .next()
        .ok_or(DecodeError::NoPath)
}
