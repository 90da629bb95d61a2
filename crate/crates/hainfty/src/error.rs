use alloc::string::String;
use core::fmt;

/// Library-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix/vector shapes do not line up.
    DimensionMismatch { expected: usize, got: usize },
    /// An operation was applied to the wrong number of inputs.
    ArityMismatch { expected: usize, got: usize },
    /// An operation has the wrong degree for the requested construction.
    DegreeMismatch { expected: i64, got: i64 },
    /// Operands live over different spaces, flavors or twisting maps.
    Incompatible(String),
    /// A precondition on the input data failed.
    InvalidInput(String),
    /// The requested verification would exceed the evaluation budget.
    BudgetExceeded { needed: u64, budget: u64 },
    /// A configuration the library deliberately does not support.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected}, got {got}")
            }
            Error::DegreeMismatch { expected, got } => {
                write!(f, "degree mismatch: expected {expected}, got {got}")
            }
            Error::Incompatible(msg) => write!(f, "incompatible operands: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "evaluation budget exceeded: needs {needed} evaluations, budget {budget}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported configuration: {msg}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
