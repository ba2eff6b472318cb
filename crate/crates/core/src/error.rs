use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-contract input. `index` is the offending position, when there is one.
    #[error("invalid input{}: {message}", index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    Validation {
        index: Option<usize>,
        message: String,
    },

    #[error("length mismatch: expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{tuple} is not an element of V({alpha})")]
    NotMember { tuple: String, alpha: String },

    #[error("{what} needs {required} elements, above the bound of {bound}")]
    Resource {
        what: String,
        required: u128,
        bound: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A self-check failed. Reaching this means the library has a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(index: Option<usize>, message: impl Into<String>) -> Self {
        Error::Validation {
            index,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
