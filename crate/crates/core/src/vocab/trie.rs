use std::collections::{BTreeSet, HashMap};

use crate::pinyin::Syllable;

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<Syllable, usize>,
    words: BTreeSet<String>,
}

/// Maps syllable sequences to the words readable as them.
///
/// Nodes are never freed; removing the last word under a path leaves the
/// path in place.
#[derive(Debug, Clone)]
pub struct SyllableTrie {
    nodes: Vec<Node>,
}

impl Default for SyllableTrie {
    fn default() -> Self {
        SyllableTrie {
            nodes: vec![Node::default()],
        }
    }
}

impl SyllableTrie {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: &[Syllable], word: &str) {
        let mut at = 0;
        for s in path {
            at = match self.nodes[at].children.get(s) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[at].children.insert(s.clone(), next);
                    next
                }
            };
        }
        if !self.nodes[at].words.contains(word) {
            self.nodes[at].words.insert(word.to_string());
        }
    }

    pub fn remove(&mut self, path: &[Syllable], word: &str) {
        if let Some(at) = self.find(path) {
            self.nodes[at].words.remove(word);
        }
    }

    fn find<S: AsRef<str>>(&self, path: &[S]) -> Option<usize> {
        let mut at = 0;
        for s in path {
            at = *self.nodes[at].children.get(s.as_ref())?;
        }
        Some(at)
    }

    /// Words stored exactly under `path`.
    pub fn get<S: AsRef<str>>(&self, path: &[S]) -> Option<&BTreeSet<String>> {
        self.find(path).map(|at| &self.nodes[at].words)
    }

    /// Walks `syllables` from the front, yielding `(depth, words)` for every
    /// non-empty node up to `max_depth` syllables deep.
    pub fn prefixes<'a, S: AsRef<str>>(
        &'a self,
        syllables: &[S],
        max_depth: usize,
    ) -> Vec<(usize, &'a BTreeSet<String>)> {
        let mut out = Vec::new();
        let mut at = 0;
        for (i, s) in syllables.iter().take(max_depth).enumerate() {
            match self.nodes[at].children.get(s.as_ref()) {
                Some(&next) => at = next,
                None => break,
            }
            if !self.nodes[at].words.is_empty() {
                out.push((i + 1, &self.nodes[at].words));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> Vec<Syllable> {
        s.split(' ').map(|x| Syllable::new(x).unwrap()).collect()
    }

    #[test]
    fn insert_lookup_remove() {
        let mut trie = SyllableTrie::new();
        trie.insert(&path("bei jing"), "北京");
        trie.insert(&path("bei jing"), "背景");
        trie.insert(&path("bei"), "北");
        let words: Vec<_> = trie.get(&["bei", "jing"]).unwrap().iter().cloned().collect();
        assert_eq!(words, ["北京", "背景"]);
        let pre = trie.prefixes(&["bei", "jing", "da"], 4);
        assert_eq!(pre.len(), 2);
        assert_eq!(pre[0].0, 1);
        assert_eq!(pre[1].0, 2);
        assert!(trie.prefixes(&["bei", "jing"], 1).len() == 1);
        trie.remove(&path("bei jing"), "北京");
        let words: Vec<_> = trie.get(&["bei", "jing"]).unwrap().iter().cloned().collect();
        assert_eq!(words, ["背景"]);
        assert!(trie.get(&["jing"]).is_none());
    }
}
