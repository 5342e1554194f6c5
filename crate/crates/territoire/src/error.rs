use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: dimension {requested} exceeds cap {cap}")]
    SizeCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("budget exceeded for {what}: needs {needed}, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("not an ideal: basis row {row} times basis element {with} escapes the span")]
    NotAnIdeal { row: usize, with: usize },
    #[error("unit lies in the ideal; the quotient would not be unital")]
    UnitInIdeal,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid conductance vector: {0}")]
    InvalidConductances(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid subalgebra: {0}")]
    InvalidSubalgebra(String),
    #[error("invalid singularity type (g={g}, c={c:?}): {msg}")]
    InvalidSingularityType { g: u32, c: Vec<u32>, msg: String },
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("ambient algebra is not the expected truncated product")]
    NotTruncatedProduct,
    #[error("corrupted subalgebra data: {0}")]
    Corrupted(String),
    #[error("invalid combinatorial type: {0}")]
    InvalidType(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
