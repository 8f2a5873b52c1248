use thiserror::Error;

/// Errors raised by model loading, explanation and scoring.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at token {token} (offset {offset}): {message}")]
    Syntax {
        token: usize,
        offset: usize,
        message: String,
    },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("value {value} is outside the domain of feature {feature}")]
    Domain { feature: usize, value: i64 },
    #[error("point has {got} coordinates, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("label mismatch: instance says {given}, classifier predicts {predicted}")]
    LabelMismatch { given: u32, predicted: u32 },
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("invalid relabeling: {0}")]
    InvalidRelabeling(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("table dimension mismatch: {left} vs {right} features")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("{0} has no dual")]
    NoDual(String),
    #[error("invalid weighted voting game: {0}")]
    InvalidGame(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
