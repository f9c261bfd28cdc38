use thiserror::Error;

pub type Result<T> = std::result::Result<T, QstError>;

#[derive(Debug, Error)]
pub enum QstError {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity could not be represented in double precision.
    #[error("precision loss: {0}")]
    Precision(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QstError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        QstError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end: 2 for numeric
    /// failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            QstError::Numeric(_) | QstError::Precision(_) => 2,
            _ => 1,
        }
    }
}
