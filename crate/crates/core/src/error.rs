use thiserror::Error;

use crate::complex::GenId;

/// Errors shared by every module of the kernel.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown basis element `{0}`")]
    UnknownGenerator(GenId),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("boundary mismatch at `{context}`")]
    BoundaryMismatch { context: String },
    #[error("cells are not composable at dimension {k}")]
    NotComposable { k: usize },
    #[error("complex is not a valid directed complex: {0}")]
    InvalidComplex(String),
    #[error("operation requires a strongly loop-free unital basis ({0})")]
    NotSteiner(String),
    #[error("marking levels differ")]
    MarkLevelMismatch,
    #[error("budget of {budget} exhausted during {context}")]
    BudgetExhausted { budget: usize, context: String },
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
