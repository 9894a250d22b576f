use thiserror::Error;

use crate::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A checked operation left the exact-integer width.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// Overflow raised while evaluating a specific pair of a sweep.
    #[error("arithmetic overflow at (x={x}, y={y}) in {what}")]
    OverflowAt { x: Point, y: Point, what: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Iteration cap reached before the trajectory hit 1.
    #[error("seed {seed} did not reach 1 within {cap} steps")]
    CapExceeded { seed: Point, cap: u64 },

    #[error("search budget of {budget} evaluations exceeded")]
    BudgetExceeded { budget: u64 },
}

impl Error {
    pub fn is_overflow(&self) -> bool {
        matches!(self, Error::Overflow(_) | Error::OverflowAt { .. })
    }

    /// Attach the offending pair to a bare overflow.
    pub fn at(self, x: Point, y: Point) -> Error {
        match self {
            Error::Overflow(what) => Error::OverflowAt { x, y, what },
            other => other,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
