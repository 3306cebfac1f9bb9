use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A filtration violates `X_n ⊇ X_{n+1}` between two consecutive degrees.
    #[error("filtration is not decreasing at degree {degree}: {detail}")]
    FiltrationOrder { degree: i64, detail: String },

    #[error("set {0} is not specialization closed")]
    NotThomason(String),

    /// Condition (†) fails; the witness is `(m, m', p)`.
    #[error("incompatible family at degree {degree}: prime {prime} separates {left} and {right}")]
    IncompatibleFamily {
        degree: i64,
        left: String,
        right: String,
        prime: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
