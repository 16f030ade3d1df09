use std::collections::HashMap;

/// Continuations observed after one context.
#[derive(Debug, Clone, Default)]
pub struct Row {
    total: u64,
    next: HashMap<String, u64>,
}

impl Row {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, word: &str) -> u64 {
        self.next.get(word).copied().unwrap_or(0)
    }
}

/// Word n-gram counts of orders `1..=order`.
///
/// A count for `w1 .. wk` is kept in the row of context `w1 .. w(k-1)`, so a
/// row total is the number of observed continuations of its context. The
/// empty context holds unigram counts.
#[derive(Debug, Clone)]
pub struct NGramStore {
    order: usize,
    rows: HashMap<Vec<String>, Row>,
    entries: usize,
}

impl NGramStore {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "n-gram order must be at least 1");
        NGramStore {
            order,
            rows: HashMap::new(),
            entries: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct stored n-grams.
    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    /// Counts every n-gram of order `1..=order` occurring in `words`.
    pub fn add_sequence<S: AsRef<str>>(&mut self, words: &[S]) {
        for start in 0..words.len() {
            for len in 1..=self.order.min(words.len() - start) {
                let gram = &words[start..start + len];
                let context: Vec<String> = gram[..len - 1].iter().map(|w| w.as_ref().to_string()).collect();
                self.add_count(context, gram[len - 1].as_ref(), 1);
            }
        }
    }

    /// Adds `count` to the n-gram `context + [word]`.
    pub fn add_count(&mut self, context: Vec<String>, word: &str, count: u64) {
        assert!(context.len() < self.order, "n-gram longer than store order");
        let row = self.rows.entry(context).or_default();
        row.total += count;
        match row.next.get_mut(word) {
            Some(c) => *c += count,
            None => {
                row.next.insert(word.to_string(), count);
                self.entries += 1;
            }
        }
    }

    pub fn row(&self, context: &[String]) -> Option<&Row> {
        self.rows.get(context)
    }

    /// Σ_w Count(context w).
    pub fn row_total(&self, context: &[String]) -> u64 {
        self.rows.get(context).map_or(0, |r| r.total)
    }

    /// Count of the full n-gram `gram`.
    pub fn count<S: AsRef<str>>(&self, gram: &[S]) -> u64 {
        let Some((last, context)) = gram.split_last() else {
            return 0;
        };
        let context: Vec<String> = context.iter().map(|w| w.as_ref().to_string()).collect();
        self.rows.get(&context).map_or(0, |r| r.count(last.as_ref()))
    }

    /// Continuations of `context` sorted by word.
    pub fn continuations(&self, context: &[String]) -> Vec<(String, u64)> {
        let mut out: Vec<_> = self
            .rows
            .get(context)
            .map(|r| r.next.iter().map(|(w, c)| (w.clone(), *c)).collect())
            .unwrap_or_default();
        out.sort();
        out
    }

    /// Every stored n-gram with its count, sorted by word sequence.
    pub fn sorted_entries(&self) -> Vec<(Vec<String>, u64)> {
        let mut out = Vec::with_capacity(self.entries);
        for (context, row) in &self.rows {
            for (w, c) in &row.next {
                let mut gram = context.clone();
                gram.push(w.clone());
                out.push((gram, *c));
            }
        }
        out.sort();
        out
    }
}
