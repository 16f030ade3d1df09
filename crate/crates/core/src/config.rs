use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid config: {0}")]
pub struct ConfigError(pub String);

/// Parameters shared by the learner, the vocabulary and the decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    /// IWL added to every injected substring.
    pub alpha: f64,
    /// Weight of the segmentation probability in the segmentation bonus.
    pub beta: f64,
    /// Flat segmentation bonus.
    pub gamma: f64,
    /// Vocabulary capacity.
    pub cap: usize,
    /// Culling period, in observations.
    pub per: u64,
    /// Longest word, in characters.
    pub maxlen: usize,
    /// Word n-gram order.
    pub order: usize,
    /// Displayed candidate list depth; also the internal k-best depth.
    pub k: usize,
    /// Unigram floor for words outside the vocabulary.
    pub epsilon: f64,
    /// Multiplier applied per backoff step for unseen histories.
    pub backoff: f64,
    /// Use the per-word geometric mean of Pr[W] in the segmentation bonus.
    pub bonus_norm: bool,
    /// Natural-log margin within which lower ranked full conversions are
    /// still listed as candidates.
    pub alt_margin: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            alpha: 1.0,
            beta: 5.0,
            gamma: 1.0,
            cap: 1_000_000,
            per: 1000,
            maxlen: 4,
            order: 4,
            k: 10,
            epsilon: 1e-8,
            backoff: 0.4,
            bonus_norm: false,
            alt_margin: 1000f64.ln(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: &str| Err(ConfigError(m.to_string()));
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.gamma >= 0.0) {
            return err("alpha, beta and gamma must be non-negative");
        }
        if self.cap == 0 || self.per == 0 || self.maxlen == 0 || self.k == 0 {
            return err("cap, per, maxlen and k must be positive");
        }
        if self.order == 0 {
            return err("order must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return err("epsilon must be in (0, 1]");
        }
        if !(self.backoff > 0.0 && self.backoff < 1.0) {
            return err("backoff must be in (0, 1)");
        }
        if self.alt_margin.is_nan() || self.alt_margin < 0.0 {
            return err("alt_margin must be non-negative");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = EngineConfig::default();
        assert_eq!((c.alpha, c.beta, c.gamma), (1.0, 5.0, 1.0));
        assert_eq!(c.cap, 1_000_000);
        assert_eq!(c.order, 4);
        assert_eq!(c.maxlen, 4);
        assert_eq!(c.per, 1000);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            EngineConfig { alpha: -1.0, ..Default::default() },
            EngineConfig { cap: 0, ..Default::default() },
            EngineConfig { epsilon: 0.0, ..Default::default() },
            EngineConfig { backoff: 1.0, ..Default::default() },
            EngineConfig { order: 0, ..Default::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
