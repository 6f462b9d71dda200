use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by tensor construction, operators, and the tape.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{op}: shape mismatch: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("{op}: {detail}")]
    InvalidArgument { op: &'static str, detail: String },

    #[error("token id {id} out of range (vocabulary size {limit}) at position {position}")]
    IdOutOfRange {
        position: usize,
        id: usize,
        limit: usize,
    },

    #[error("non-finite value in `{name}`")]
    NonFinite { name: String },

    #[error("duplicate parameter name `{name}`")]
    DuplicateParameter { name: String },

    #[error("backward was already run on this tape")]
    TapeConsumed,

    #[error("loss must be a scalar, got shape {shape:?}")]
    LossNotScalar { shape: Vec<usize> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }

    pub fn invalid(op: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            detail: detail.into(),
        }
    }
}
