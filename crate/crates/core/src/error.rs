use thiserror::Error;

/// Errors shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed ESOP or circuit text, with the 1-based source line.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An argument violated a documented precondition.
    #[error("{0}")]
    Validation(String),

    /// An operation would exceed its enumeration or memory guard.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A simulator met a gate outside the fragment it can evaluate.
    #[error("gate {index} ({kind}) is outside the {fragment} fragment")]
    Fragment {
        index: usize,
        kind: &'static str,
        fragment: &'static str,
    },

    /// Expanded-depth accounting is defined on primitive circuits only.
    #[error("expanded cost model requires a primitive circuit, but gate {index} ({kind}) is a macro")]
    MacroInExpanded { index: usize, kind: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
