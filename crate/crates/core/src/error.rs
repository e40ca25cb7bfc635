use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid circle: {0}")]
    InvalidCircle(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid curve {index}: {reason}")]
    InvalidCurve { index: usize, reason: String },

    #[error("curve {index} is not convex")]
    NotConvex { index: usize },

    #[error("degenerate polygon: {0}")]
    Degenerate(String),

    #[error("point outside the valid region: {0}")]
    OutsideDomain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("disk map for curve {index} failed: {reason}")]
    DiskMap { index: usize, reason: String },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("size mismatch: {0}")]
    Mismatch(String),

    #[error("word problem undecided: reduction budget of {0} steps exceeded")]
    Undecided(usize),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
