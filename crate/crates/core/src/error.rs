use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid block configuration: {0}")]
    InvalidConfig(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty variable set")]
    EmptyVarSet,

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("product factors share or interleave variables: {0}")]
    IncompatibleFactors(String),

    #[error("cell set is not closed under taking faces: missing {0}")]
    NotFaceClosed(String),

    #[error("complex does not support a minimal resolution: {0}")]
    NotMinimal(String),

    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeCap {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("{0} is not a prime below 2^31")]
    InvalidPrime(u64),

    #[error("expected {expected}, got {got}")]
    Unexpected { expected: String, got: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
