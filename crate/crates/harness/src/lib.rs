//! End-to-end orchestration: pipeline stages on disk, predictor calls,
//! resumable multi-run evaluation and report export.

pub mod analyze;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod io;
pub mod pipeline;
pub mod predictor;
pub mod report;
pub mod score;

pub use analyze::{analyze, AnalysisBundle, CaseSummary};
pub use config::{EvalSplit, HarnessConfig, PredictorConfig};
pub use error::{HarnessError, Result};
pub use evaluate::{run_evaluation, PredictionRecord};
pub use pipeline::{run_pipeline, BenchmarkArtifacts, StageSummary};
pub use predictor::{build_predictor, Predictor, PredictorError};
pub use report::{export_report, ReportFormat};
pub use score::score_answer;
