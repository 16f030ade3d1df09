//! Adaptive pinyin input method engine that learns word likelihoods online
//! from committed text.

pub mod baseline;
pub mod config;
pub mod decoder;
pub mod engine;
pub mod eval;
pub mod learner;
pub mod pinyin;
pub mod synth;
pub mod vocab;

pub use baseline::{convert_offline, train_offline, OfflineModel, TrainingRecord};
pub use config::{ConfigError, EngineConfig};
pub use decoder::{Candidate, ConversionResult, DecodeError, FallbackPolicy};
pub use engine::{Engine, EngineError};
pub use eval::{run_simulation, topk_score, ConversionEngine, CorpusRecord, ScoreReport};
pub use learner::{Learner, Observation, ObserveError, OnlineModel};
pub use pinyin::{Inventory, PinyinLm, PinyinTable, SegmentError, Syllable};
pub use vocab::{ImeWord, NGramStore, Vocabulary};
