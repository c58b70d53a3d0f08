use thiserror::Error;

/// Errors raised by region construction, transfer-function handling,
/// stability analysis and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SrgError {
    #[error("input outside domain: {0}")]
    Domain(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operand contains the point at infinity: {0}")]
    ContainsInfinity(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("transfer function is not stable: {0}")]
    Unstable(String),
    #[error("no stability certificate: {0}")]
    NoCertificate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, SrgError>;
