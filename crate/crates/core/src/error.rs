use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty hull")]
    EmptyHull,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("flat dimension {f} out of range for ambient dimension {d}")]
    FlatDimOutOfRange { f: usize, d: usize },

    #[error("input {index} is not a hyperplane (dimension {dim} in E^{ambient})")]
    NotHyperplane {
        index: usize,
        dim: usize,
        ambient: usize,
    },

    #[error("constraint system has no solution")]
    Infeasible,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("generator failed predicate `{predicate}` after {attempts} attempts")]
    GeneratorExhausted { predicate: String, attempts: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
