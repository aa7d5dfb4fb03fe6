use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A computation would exceed a configured size bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed textual or JSON input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    /// Two objects that must share a candidate set (or dimension) do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// A simplex point cannot be realized at the requested voter count.
    #[error("n*x is not integral in coordinate {coordinate}")]
    NonIntegral { coordinate: usize },

    /// A consensus, rule or metric description is invalid.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// The combination of inputs is well formed but not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Every outcome scored +inf; the consensus cannot be reached from the input.
    #[error("all scores are infinite")]
    AllInfinite,

    /// An internal consistency check (e.g. an optimality certificate) failed.
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
