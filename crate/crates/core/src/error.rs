use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller-supplied argument is out of range or inconsistent.
    #[error("argument error: {0}")]
    Argument(String),
    /// A level or size guard was hit.
    #[error("resource cap: level {level} exceeds cap {cap} ({what})")]
    Resource {
        what: &'static str,
        level: usize,
        cap: usize,
    },
    /// Malformed text input.
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A structural or mathematical precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Input outside the supported fragment.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
