use thiserror::Error;

/// Errors raised by the library. Mathematical outcomes (non-robust verdicts,
/// stalled decoders, failed TNC checks) are reported as values, never as errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("capacity guard `{guard}` exceeded: {actual} > {limit}{hint}")]
    Capacity {
        guard: &'static str,
        limit: usize,
        actual: usize,
        hint: &'static str,
    },

    #[error("invalid group: {0}")]
    Group(String),

    #[error("total no-conjugacy violated: a={a} g={g} b={b} satisfies ag = gb")]
    Tnc { a: usize, g: usize, b: usize },

    #[error("invalid complex: {0}")]
    Complex(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn capacity(guard: &'static str, limit: usize, actual: usize) -> Self {
        Error::Capacity {
            guard,
            limit,
            actual,
            hint: "",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
