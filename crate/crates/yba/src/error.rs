use thiserror::Error;

/// Errors shared by all modules.
///
/// Resource guards (`CapExceeded`) are distinct from bad input so that
/// callers can map them to a different exit status.
#[derive(Debug, Error)]
pub enum Error {
    /// A computation would exceed a configured resource cap.  The operation
    /// fails before allocating; no partial result is produced.
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    /// Malformed input (bad indices, non-integral matrix, illegal word...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parse error in the element grammar.
    #[error("parse error: {0}")]
    Parse(String),

    /// A graded dimension sequence admits no nonnegative-integer
    /// Witt/PBW inversion; carries the first offending degree and value.
    #[error("not a PBW series: degree {degree} would need {value} generators")]
    NotPbwSeries { degree: usize, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn cap(what: impl Into<String>, needed: usize, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
