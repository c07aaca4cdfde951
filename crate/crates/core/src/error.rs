use thiserror::Error;
use toxcliff_chem::ChemError;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Chem(#[from] ChemError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("dataset has no usable rows")]
    EmptyDataset,
    #[error("no values to summarize")]
    EmptyInput,
    #[error("task {0} has an empty gold answer")]
    EmptyGold(&'static str),
    #[error("invalid fragment counts: {0}")]
    InvalidCounts(String),
    #[error("missing asset: {0}")]
    MissingAsset(String),
    #[error("no answer could be recovered from the model output")]
    NoAnswer,
    #[error("outcome bits must be 0 or 1")]
    InvalidBits,
    #[error("duplicate sample: {0}")]
    DuplicateSample(String),
    #[error("alert set is empty")]
    EmptyAlertSet,
    #[error("fragment cannot be parsed: {0}")]
    UnparseableFragment(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
