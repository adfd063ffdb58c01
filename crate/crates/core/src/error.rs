use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A machine (or the final single machine) was asked to hold more than its budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The exact solver declines instances beyond its size limit.
    #[error("exact solver refused: {0}")]
    Refused(String),

    /// An internal invariant failed. This always indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
