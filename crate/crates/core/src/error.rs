use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("variable a{index} out of range (1..={max})")]
    VariableOutOfRange { index: usize, max: usize },

    #[error("label index {index} out of range (1..={max})")]
    LabelOutOfRange { index: usize, max: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("relation must be {0}")]
    NotToleranceShaped(&'static str),

    #[error("size cap exceeded: {what} is {actual}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is not regular")]
    NotRegular,

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(format!("json: {err}"))
    }
}
