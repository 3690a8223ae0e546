use thiserror::Error;

/// Errors produced by the library.
///
/// The variants line up with the CLI exit-code classes: `Precondition`,
/// `InvalidField` and `NeedsExtension` are caller errors, `Internal` flags a
/// broken invariant, `Parse` covers malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("needs a field extension: {0}")]
    NeedsExtension(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
