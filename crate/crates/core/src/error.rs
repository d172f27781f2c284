//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpnError {
    /// Matrix shapes do not fit the requested operation.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A structural invariant of an input value does not hold.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// A block that must be inverted is singular.
    #[error("singular: {0}")]
    Singular(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The arguments do not satisfy an operation's preconditions.
    #[error("precondition: {0}")]
    Precondition(String),
    /// A response matrix does not lie in the cell of the given strand matching.
    #[error("not in cell: {0}")]
    NotInCell(String),
    /// An enumeration exceeded its configured capacity.
    #[error("capacity: {0}")]
    Capacity(String),
    /// A Laurent polynomial evaluation hit a zero denominator.
    #[error("evaluation: zero value for variable v[{x},{y}]")]
    ZeroVariable { x: i64, y: i64 },
}

impl CpnError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        CpnError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CpnError>;
