use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset has no class attribute")]
    MissingClass,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("attribute selection is empty")]
    EmptySelection,

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("missing value for `{attribute}` in record {record}")]
    MissingValue { attribute: String, record: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("constant input: {0}")]
    ConstantInput(String),

    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("contingency table has a zero marginal")]
    ZeroMarginal,

    #[error("counts sum to zero")]
    ZeroCounts,

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
