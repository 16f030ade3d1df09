//! The input method engine: pinyin segmentation, conversion and learning
//! behind one handle, with directory snapshots.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, EngineConfig};
use crate::decoder::{convert, ConversionResult, DecodeError, FallbackPolicy};
use crate::learner::{Learner, Observation, ObserveError};
use crate::pinyin::{segment_pinyin, PinyinLm, PinyinTable, SegmentError, Syllable};
use crate::vocab::{read_ngrams, read_vocab, write_ngrams, write_vocab, RunningTotal, VocabError, Vocabulary};

pub const SNAPSHOT_VERSION: u32 = 1;
const VOCAB_FILE: &str = "vocab.tsv";
const NGRAM_FILE: &str = "ngrams.tsv";
const META_FILE: &str = "engine.json";

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Observe(#[from] ObserveError),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<VocabError> for EngineError {
    fn from(e: VocabError) -> Self {
        EngineError::Snapshot(e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotMeta {
    version: u32,
    updates: u64,
    config: EngineConfig,
    iwl_sum: f64,
    iwl_compensation: f64,
}

#[derive(Debug, Clone)]
pub struct Engine {
    learner: Learner,
    syllable_lm: Option<Arc<PinyinLm>>,
}

impl Engine {
    pub fn new(config: EngineConfig, table: Arc<PinyinTable>) -> Result<Self, EngineError> {
        config.validate()?;
        Ok(Engine {
            learner: Learner::new(config, table),
            syllable_lm: None,
        })
    }

    /// Uses `lm` to choose between segmentations of raw pinyin.
    pub fn with_syllable_lm(mut self, lm: Arc<PinyinLm>) -> Self {
        self.syllable_lm = Some(lm);
        self
    }

    pub fn config(&self) -> &EngineConfig {
        self.learner.config()
    }

    pub fn table(&self) -> &Arc<PinyinTable> {
        self.learner.table()
    }

    pub fn learner(&self) -> &Learner {
        &self.learner
    }

    pub fn vocab(&self) -> &Vocabulary {
        self.learner.vocab()
    }

    pub fn updates(&self) -> u64 {
        self.learner.updates()
    }

    pub fn segment(&self, raw: &str) -> Result<Vec<Syllable>, SegmentError> {
        segment_pinyin(raw, self.syllable_lm.as_deref(), self.table())
    }

    /// Segments `raw` pinyin and converts it.
    pub fn convert(&self, raw: &str) -> Result<(Vec<Syllable>, ConversionResult), EngineError> {
        let syllables = self.segment(raw)?;
        let result = self.convert_syllables(&syllables)?;
        Ok((syllables, result))
    }

    pub fn convert_syllables(&self, syllables: &[Syllable]) -> Result<ConversionResult, DecodeError> {
        let c = self.config();
        convert(
            syllables,
            &self.learner.model(),
            self.table(),
            FallbackPolicy::Always,
            c.k,
            c.alt_margin,
        )
    }

    /// Learns from a committed conversion of `pinyin` into `chars`.
    pub fn commit(&mut self, chars: &str, pinyin: &[Syllable]) -> Result<Observation, ObserveError> {
        self.learner.observe(chars, pinyin)
    }

    /// The `m` highest IWL words.
    pub fn top_words(&self, m: usize) -> Vec<(String, f64)> {
        self.vocab().top_words(m)
    }

    /// Forgets everything learned, keeping configuration and models.
    pub fn reset(&mut self) {
        self.learner = Learner::new(self.config().clone(), self.table().clone());
    }

    /// Writes the vocabulary in the snapshot format.
    pub fn export_vocab<W: Write>(&self, out: W) -> Result<(), EngineError> {
        write_vocab(self.vocab(), out)?;
        Ok(())
    }

    /// Replaces the vocabulary with the entries in `source`, keeping the
    /// n-gram counts. Returns the new vocabulary size.
    pub fn import_vocab<R: BufRead>(&mut self, source: R) -> Result<usize, EngineError> {
        let c = self.config().clone();
        let mut vocab = Vocabulary::new(c.maxlen, c.epsilon).with_table(self.table().clone());
        read_vocab(source, &mut vocab)?;
        let learner = &self.learner;
        self.learner = Learner::from_parts(c, learner.table().clone(), vocab, learner.store().clone(), learner.updates());
        Ok(self.vocab().len())
    }

    /// Writes the learned state to `dir`, creating it if needed.
    pub fn save(&self, dir: &Path) -> Result<(), EngineError> {
        fs::create_dir_all(dir)?;
        let total = self.vocab().running_total();
        let meta = SnapshotMeta {
            version: SNAPSHOT_VERSION,
            updates: self.updates(),
            config: self.config().clone(),
            iwl_sum: total.sum,
            iwl_compensation: total.compensation,
        };
        // Write to temporary names first so a crash leaves the old snapshot.
        let tmp = |name: &str| dir.join(format!("{name}.tmp"));
        write_vocab(self.vocab(), BufWriter::new(File::create(tmp(VOCAB_FILE))?))?;
        write_ngrams(self.learner.store(), BufWriter::new(File::create(tmp(NGRAM_FILE))?))?;
        let mut json = serde_json::to_string_pretty(&meta).map_err(|e| EngineError::Snapshot(e.to_string()))?;
        json.push('\n');
        fs::write(tmp(META_FILE), json)?;
        for name in [VOCAB_FILE, NGRAM_FILE, META_FILE] {
            fs::rename(tmp(name), dir.join(name))?;
        }
        Ok(())
    }

    /// Restores an engine saved by [`Engine::save`].
    pub fn load(dir: &Path, table: Arc<PinyinTable>) -> Result<Self, EngineError> {
        let meta: SnapshotMeta = serde_json::from_slice(&fs::read(dir.join(META_FILE))?)
            .map_err(|e| EngineError::Snapshot(format!("{META_FILE}: {e}")))?;
        if meta.version != SNAPSHOT_VERSION {
            return Err(EngineError::Snapshot(format!(
                "unsupported snapshot version {}",
                meta.version
            )));
        }
        meta.config.validate()?;
        let config = meta.config;
        let mut vocab = Vocabulary::new(config.maxlen, config.epsilon).with_table(table.clone());
        read_vocab(BufReader::new(File::open(dir.join(VOCAB_FILE))?), &mut vocab)
            .map_err(|e| EngineError::Snapshot(format!("{VOCAB_FILE}: {e}")))?;
        vocab.set_running_total(RunningTotal {
            sum: meta.iwl_sum,
            compensation: meta.iwl_compensation,
        });
        let store = read_ngrams(BufReader::new(File::open(dir.join(NGRAM_FILE))?), config.order)
            .map_err(|e| EngineError::Snapshot(format!("{NGRAM_FILE}: {e}")))?;
        Ok(Engine {
            learner: Learner::from_parts(config, table, vocab, store, meta.updates),
            syllable_lm: None,
        })
    }
}
