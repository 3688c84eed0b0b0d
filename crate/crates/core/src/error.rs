use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// An input outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation would exceed its size or time budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("tournament {0} is not strongly connected")]
    NotStronglyConnected(String),
    #[error("tournament {0} is Lyndon; no reduction applies")]
    IsLyndon(String),
    /// Every violated invariant of a step tournamenton.
    #[error("invalid tournamenton: {}", .0.join("; "))]
    InvalidTournamenton(Vec<String>),
    #[error("no binding for variable {0}")]
    MissingBinding(String),
    /// Random trials never hit a point where the determinant is non-zero.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
