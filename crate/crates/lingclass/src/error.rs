use thiserror::Error;

/// Errors produced by ingestion, encoding, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("csv parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("cannot encode \"{0}\": no A-Z letters after folding")]
    Encoding(String),
    #[error("cannot label an empty cluster")]
    EmptyCluster,
    #[error("training set is empty")]
    EmptyTraining,
    #[error("roc curve undefined for class {class}: need at least one positive and one negative")]
    UndefinedCurve { class: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
