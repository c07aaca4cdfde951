use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChemError {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("fingerprints are not comparable (different kind or size)")]
    KindMismatch,
    #[error("unsupported fingerprint configuration: {0}")]
    UnsupportedKind(String),
    #[error("SAFE encoding failed: {0}")]
    Encoding(String),
    #[error("SAFE decoding failed: {0}")]
    Decode(String),
    #[error("no fragment tokens in input")]
    EmptyInput,
}

impl ChemError {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        ChemError::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
