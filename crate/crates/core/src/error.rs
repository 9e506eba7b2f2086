use thiserror::Error;

/// Errors raised by the library.
///
/// Detection failures and collisions are *outcomes* of the matching scheme and
/// are reported through [`crate::MatchEstimate`], never through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller broke a precondition: mismatched lengths, shapes, or out-of-range input.
    #[error("usage error: {0}")]
    Usage(String),
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A resource guard (memory cap, enumeration budget) would be exceeded.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Inputs were not produced by the deletion model (e.g. the recovered
    /// pattern size disagrees with the column counts).
    #[error("model violation: {0}")]
    ModelViolation(String),
    /// Malformed database text or distribution spec.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! usage {
    ($($arg:tt)*) => { $crate::error::Error::Usage(format!($($arg)*)) };
}
pub(crate) use usage;
