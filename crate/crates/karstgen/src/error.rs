//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph not connected")]
    GraphNotConnected,

    #[error("bandwidth exceeded: edge spans {span} positions, limit is {limit}")]
    BandwidthExceeded { span: usize, limit: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: String,
        got: String,
    },

    #[error("feature '{0}' has zero variance")]
    ZeroVarianceFeature(String),

    #[error("connected component entirely masked for feature '{0}'")]
    MaskedComponent(String),

    #[error("model collapsed: {0} consecutive degenerate samples")]
    ModelCollapsed(usize),

    #[error("backward on a detached value")]
    DetachedBackward,

    #[error("checkpoint does not match configured architecture: {}", .0.join("; "))]
    CheckpointMismatch(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    ParseError {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn dim(context: &str, expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            context: context.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
