use thiserror::Error;
use toxcliff_core::CoreError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("json error in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error("missing stage input {0}; run the earlier stage first")]
    MissingStage(String),
    #[error("predictor error: {0}")]
    Predictor(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
