use std::fmt;

/// Error type for all fallible operations in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the input was violated (shape, range, mode, ...).
    InvalidInput(String),
    /// Two values with incompatible variable counts were combined.
    ArityMismatch { left: usize, right: usize },
    /// An operator with zero constant term (in the difference-operator
    /// basis) cannot be inverted over polynomials.
    NotInvertible(String),
    /// An internal consistency check failed; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::ArityMismatch { left, right } => {
                write!(f, "arity mismatch: {left} vs {right}")
            }
            Error::NotInvertible(msg) => write!(f, "operator not invertible: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
