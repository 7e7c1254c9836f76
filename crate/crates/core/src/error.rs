use thiserror::Error;

use crate::bounds::ComplexityInterval;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group validation failed: {0}")]
    Validation(String),

    #[error("structure matrix is not regular: {0}")]
    Regularity(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("closure exceeded the element budget of {0}")]
    ElementBudgetExceeded(usize),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("values belong to different contexts: {0}")]
    ContextMismatch(String),

    #[error("enumeration exceeded the cap of {0}")]
    CapExceeded(usize),

    #[error("iteration exceeded the budget of {0}")]
    IterationBudgetExceeded(usize),

    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("complexity bounds are indeterminate: {0}")]
    IndeterminateBounds(Box<ComplexityInterval>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
