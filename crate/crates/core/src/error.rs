use thiserror::Error;

/// Errors raised by the engine.
///
/// `SizeGuard` is a refusal, not a failure: the request is well-formed but
/// exceeds a configured resource bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured maximum of {bound}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("join formula requires free homology, but the base group for block size {block} has torsion")]
    TorsionInJoin { block: usize },

    #[error("r = 2 is the classical case: the homological and homotopical layers agree only for k = 2")]
    ClassicalCase,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    /// True for resource refusals (as opposed to bad input or broken invariants).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. })
    }
}
