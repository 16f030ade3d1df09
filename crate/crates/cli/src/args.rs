use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omwa_core::EngineConfig;

#[derive(Debug, Parser)]
#[command(name = "omwa", version, about = "Adaptive pinyin input method engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a corpus through an engine and write a score report.
    Simulate(SimulateArgs),
    /// Train an offline n-gram model from a segmented corpus.
    TrainOffline(TrainArgs),
    /// Serve the engine over HTTP.
    Serve(ServeArgs),
    /// Write the vocabulary of a snapshot as TSV.
    ExportVocab(ExportArgs),
    /// Replace the vocabulary of a snapshot from TSV.
    ImportVocab(ImportArgs),
    /// Extract and annotate MIUs from raw text.
    PrepareCorpus(PrepareArgs),
}

/// Engine parameters. Flags override `OMWA_*` variables, which override
/// the defaults.
#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[arg(long, env = "OMWA_ALPHA")]
    pub alpha: Option<f64>,
    #[arg(long, env = "OMWA_BETA")]
    pub beta: Option<f64>,
    #[arg(long, env = "OMWA_GAMMA")]
    pub gamma: Option<f64>,
    /// Vocabulary capacity.
    #[arg(long, env = "OMWA_CAP")]
    pub cap: Option<usize>,
    /// Culling period in observations.
    #[arg(long, env = "OMWA_PER")]
    pub per: Option<u64>,
    /// Longest word in characters.
    #[arg(long, env = "OMWA_MAXLEN")]
    pub maxlen: Option<usize>,
    /// Word n-gram order.
    #[arg(long, env = "OMWA_ORDER")]
    pub order: Option<usize>,
    /// Candidate list depth.
    #[arg(long, env = "OMWA_CANDIDATES")]
    pub candidates: Option<usize>,
    #[arg(long, env = "OMWA_EPSILON")]
    pub epsilon: Option<f64>,
    #[arg(long, env = "OMWA_BACKOFF")]
    pub backoff: Option<f64>,
    /// Scale the segmentation bonus by the per-word geometric mean.
    #[arg(long, env = "OMWA_BONUS_NORM")]
    pub bonus_norm: Option<bool>,
    /// Log-score margin for alternative full conversions.
    #[arg(long, env = "OMWA_ALT_MARGIN")]
    pub alt_margin: Option<f64>,
}

impl EngineArgs {
    pub fn config(&self) -> EngineConfig {
        let d = EngineConfig::default();
        EngineConfig {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            gamma: self.gamma.unwrap_or(d.gamma),
            cap: self.cap.unwrap_or(d.cap),
            per: self.per.unwrap_or(d.per),
            maxlen: self.maxlen.unwrap_or(d.maxlen),
            order: self.order.unwrap_or(d.order),
            k: self.candidates.unwrap_or(d.k),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            backoff: self.backoff.unwrap_or(d.backoff),
            bonus_norm: self.bonus_norm.unwrap_or(d.bonus_norm),
            alt_margin: self.alt_margin.unwrap_or(d.alt_margin),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Omwa,
    Unigram,
    Bigram,
    Trigram,
}

impl EngineKind {
    pub fn order(self) -> Option<usize> {
        match self {
            EngineKind::Omwa => None,
            EngineKind::Unigram => Some(1),
            EngineKind::Bigram => Some(2),
            EngineKind::Trigram => Some(3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Omwa => "omwa",
            EngineKind::Unigram => "unigram",
            EngineKind::Bigram => "bigram",
            EngineKind::Trigram => "trigram",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "omwa")]
    pub engine: EngineKind,
    /// Test corpus, `<MIU>[\t<syllables>]` per line.
    #[arg(long, required_unless_present = "interleave", conflicts_with = "interleave")]
    pub corpus: Option<PathBuf>,
    /// Two corpora to cut into segments and alternate.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub interleave: Option<Vec<PathBuf>>,
    #[arg(long, default_value_t = 5, requires = "interleave")]
    pub segments: usize,
    /// Segmented training corpus for offline engines.
    #[arg(long, conflicts_with = "model")]
    pub train: Option<PathBuf>,
    /// Offline model saved by `train-offline`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Candidate depths to score.
    #[arg(long, value_delimiter = ',', default_value = "1,10")]
    pub k: Vec<usize>,
    /// MIUs per reported group.
    #[arg(long, default_value_t = 2000)]
    pub group: usize,
    #[arg(long, default_value = "report.csv")]
    pub csv: PathBuf,
    #[arg(long, default_value = "report.json")]
    pub json: PathBuf,
    /// Save the learned OMWA state here after the run.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[command(flatten)]
    pub engine_args: EngineArgs,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// `<w1> <w2> ...\t<syl1> <syl2> ...` per line.
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub order: u8,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "OMWA_HOST", default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, env = "OMWA_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Snapshot directory, loaded at startup if present and saved on
    /// shutdown and every `per` commits.
    #[arg(long, env = "OMWA_SNAPSHOT")]
    pub snapshot: Option<PathBuf>,
    /// Corpus whose pinyin trains the syllable model used to segment input.
    #[arg(long)]
    pub segment_corpus: Option<PathBuf>,
    #[command(flatten)]
    pub engine_args: EngineArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub snapshot: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// Snapshot directory; created with the given engine flags if missing.
    #[arg(long)]
    pub snapshot: PathBuf,
    #[arg(long)]
    pub vocab: PathBuf,
    #[command(flatten)]
    pub engine_args: EngineArgs,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Raw UTF-8 text.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}
