use thiserror::Error;

/// Errors raised anywhere in the construction pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A constructed object produced a value that cannot be a count.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("decomposition depth cap {cap} exceeded")]
    DepthExceeded { cap: usize },

    #[error("language not contained in the bounding words: witness {word:?}")]
    Containment { word: String },

    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
