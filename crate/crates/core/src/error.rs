use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the combinatorial operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the arguments does not hold (width mismatch,
    /// index out of range, malformed value).
    InvalidArgument(String),
    /// The request is well-formed but exceeds a documented operational
    /// limit (width cap, dense tree limit, exact-search limit).
    Capability(String),
    /// No object with the requested property exists (for example a cover
    /// by families of string dimension < 1).
    Infeasible(String),
    /// Integer arithmetic would overflow the supported range.
    Overflow(String),
    /// Formula syntax error at a 1-based line and column.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Formula evaluation error (unknown relation, arity mismatch, ...).
    Eval(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Capability(msg) => write!(f, "capability limit: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::Syntax {
                line,
                column,
                message,
            } => write!(f, "syntax error at line {line}, column {column}: {message}"),
            Error::Eval(msg) => write!(f, "evaluation error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
