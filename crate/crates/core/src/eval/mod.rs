//! Evaluation: MIU extraction, the top-K score, corpus handling, replay and
//! reports.

mod corpus;
mod interleave;
mod miu;
mod report;
mod score;
mod simulate;

pub use corpus::{prepare_corpus, read_corpus, write_corpus, CorpusRecord, PrepareStats};
pub use interleave::{interleave, Interleaved, Span};
pub use miu::{extract_mius, is_chinese, Miu};
pub use report::{report_csv, report_json};
pub use score::topk_score;
pub use simulate::{run_simulation, ConversionEngine, GroupScore, OfflineEngine, ScoreReport, Skipped};
