use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero series")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    Inexact(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error at slice {slice}: {message}")]
    Validation { slice: usize, message: String },
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("algebra error: {0}")]
    Algebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
