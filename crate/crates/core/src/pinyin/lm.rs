//! Interpolated Kneser-Ney trigram over syllables.
//!
//! Sequences are padded as `<s> <s> s1 .. sn </s>`. The predicted alphabet is
//! every inventory syllable plus `</s>`; the lowest order interpolates with
//! the uniform distribution over that alphabet so unseen events keep mass.

use std::collections::HashMap;

use super::{Inventory, PinyinError, Syllable};

/// Absolute discount applied at every order.
pub const KN_DISCOUNT: f64 = 0.75;

/// Token id inside a [`PinyinLm`]. Ids are only meaningful for the model
/// that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(u32);

impl Token {
    pub const BOS: Token = Token(0);
    pub const EOS: Token = Token(1);
}

#[derive(Debug, Default, Clone, Copy)]
struct Context {
    /// Sum of counts (top order) or of continuation counts (lower orders).
    total: u64,
    /// Number of distinct continuations.
    distinct: u64,
}

#[derive(Debug, Clone)]
pub struct PinyinLm {
    ids: HashMap<Syllable, Token>,
    alphabet: u32,
    trigrams: HashMap<(Token, Token, Token), u64>,
    tri_ctx: HashMap<(Token, Token), Context>,
    /// N1+(. v w)
    bi_cont: HashMap<(Token, Token), u64>,
    bi_ctx: HashMap<Token, Context>,
    /// N1+(. w)
    uni_cont: HashMap<Token, u64>,
    uni_ctx: Context,
    unigrams: HashMap<Token, u64>,
}

/// Counts a syllable corpus into a Kneser-Ney trigram model with discount
/// [`KN_DISCOUNT`]. Empty records are ignored; a corpus with no syllables is
/// an error.
pub fn train_pinyin_lm<I, S>(corpus: I, inventory: &Inventory) -> Result<PinyinLm, PinyinError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[Syllable]>,
{
    let mut ids = HashMap::with_capacity(inventory.len());
    for (i, s) in inventory.iter().enumerate() {
        ids.insert(s.clone(), Token(i as u32 + 2));
    }
    let mut lm = PinyinLm {
        alphabet: inventory.len() as u32 + 1,
        ids,
        trigrams: HashMap::new(),
        tri_ctx: HashMap::new(),
        bi_cont: HashMap::new(),
        bi_ctx: HashMap::new(),
        uni_cont: HashMap::new(),
        uni_ctx: Context::default(),
        unigrams: HashMap::new(),
    };
    let mut seen_any = false;
    let mut padded = Vec::new();
    for record in corpus {
        let record = record.as_ref();
        if record.is_empty() {
            continue;
        }
        padded.clear();
        padded.extend([Token::BOS, Token::BOS]);
        for s in record {
            let t = lm
                .ids
                .get(s)
                .copied()
                .ok_or_else(|| PinyinError::UnknownSyllable(s.to_string()))?;
            padded.push(t);
        }
        padded.push(Token::EOS);
        seen_any = true;
        for t in &padded[2..] {
            *lm.unigrams.entry(*t).or_default() += 1;
        }
        for w in padded.windows(3) {
            *lm.trigrams.entry((w[0], w[1], w[2])).or_default() += 1;
        }
    }
    if !seen_any {
        return Err(PinyinError::Empty);
    }
    for (&(u, v, w), &c) in &lm.trigrams {
        let ctx = lm.tri_ctx.entry((u, v)).or_default();
        ctx.total += c;
        ctx.distinct += 1;
        *lm.bi_cont.entry((v, w)).or_default() += 1;
    }
    for (&(v, w), &n) in &lm.bi_cont {
        let ctx = lm.bi_ctx.entry(v).or_default();
        ctx.total += n;
        ctx.distinct += 1;
        *lm.uni_cont.entry(w).or_default() += 1;
    }
    for &n in lm.uni_cont.values() {
        lm.uni_ctx.total += n;
        lm.uni_ctx.distinct += 1;
    }
    Ok(lm)
}

fn interpolate(count: u64, ctx: Context, lower: f64) -> f64 {
    let total = ctx.total as f64;
    let discounted = (count as f64 - KN_DISCOUNT).max(0.0) / total;
    discounted + KN_DISCOUNT * ctx.distinct as f64 / total * lower
}

impl PinyinLm {
    pub fn token(&self, syllable: &str) -> Option<Token> {
        self.ids.get(syllable).copied()
    }

    /// Every predictable token: the inventory syllables and `</s>`.
    pub fn alphabet(&self) -> impl Iterator<Item = Token> {
        (1..=self.alphabet).map(Token)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet as usize
    }

    /// Raw count of `token` as a predicted position (excludes `<s>` padding).
    pub fn unigram_count(&self, syllable: &str) -> u64 {
        self.token(syllable)
            .and_then(|t| self.unigrams.get(&t).copied())
            .unwrap_or(0)
    }

    fn p_uni(&self, w: Token) -> f64 {
        let uniform = 1.0 / self.alphabet as f64;
        if self.uni_ctx.total == 0 {
            return uniform;
        }
        let n = self.uni_cont.get(&w).copied().unwrap_or(0);
        interpolate(n, self.uni_ctx, uniform)
    }

    fn p_bi(&self, v: Token, w: Token) -> f64 {
        let lower = self.p_uni(w);
        match self.bi_ctx.get(&v) {
            Some(&ctx) if ctx.total > 0 => {
                let n = self.bi_cont.get(&(v, w)).copied().unwrap_or(0);
                interpolate(n, ctx, lower)
            }
            _ => lower,
        }
    }

    /// P(w | u v). `w` must not be `<s>`.
    pub fn prob(&self, u: Token, v: Token, w: Token) -> f64 {
        debug_assert!(w != Token::BOS);
        let lower = self.p_bi(v, w);
        match self.tri_ctx.get(&(u, v)) {
            Some(&ctx) if ctx.total > 0 => {
                let c = self.trigrams.get(&(u, v, w)).copied().unwrap_or(0);
                interpolate(c, ctx, lower)
            }
            _ => lower,
        }
    }

    pub fn log_prob(&self, u: Token, v: Token, w: Token) -> f64 {
        self.prob(u, v, w).ln()
    }

    /// Log probability of a whole padded sequence, including `</s>`.
    /// Syllables outside the inventory give negative infinity.
    pub fn sequence_log_prob<S: AsRef<str>>(&self, syllables: &[S]) -> f64 {
        let (mut u, mut v) = (Token::BOS, Token::BOS);
        let mut total = 0.0;
        for s in syllables {
            let Some(w) = self.token(s.as_ref()) else {
                return f64::NEG_INFINITY;
            };
            total += self.log_prob(u, v, w);
            (u, v) = (v, w);
        }
        total + self.log_prob(u, v, Token::EOS)
    }
}
