use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ambient space: {0}")]
    InvalidAmbient(String),
    #[error("invalid bundle system: {0}")]
    InvalidBundles(String),
    #[error("more equations than dimensions: m = {m} > n = {n}")]
    Overdetermined { m: usize, n: usize },
    #[error("pencil index {index} out of range 1..={m}")]
    PencilIndex { index: usize, m: usize },
    #[error("degrees must be numeric for this operation")]
    SymbolicDegree,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree underflow: degree {degree} is smaller than {needed}")]
    DegreeUnderflow { degree: usize, needed: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("section does not vanish transversally (near the real discriminant)")]
    NotTransversal,
    #[error("curve subdivision exceeded its budget of {budget} cells ({partial_components} components merged so far)")]
    BudgetExceeded { budget: usize, partial_components: usize },
    #[error("degenerate system: {0}")]
    Degenerate(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("refusing uncertified topology profile")]
    Uncertified,
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
