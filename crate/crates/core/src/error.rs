use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed descriptor `{0}`")]
    Descriptor(String),
    #[error("group order {0} exceeds the cap of {max}", max = crate::group::MAX_ORDER)]
    OrderOverflow(usize),
    #[error("elements belong to different groups ({0} vs {1})")]
    ParentMismatch(String, String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
