use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Malformed input: bad rational text, missing field, wrong shape.
    #[error("invalid input: {0}")]
    Schema(String),
    /// Wall enumeration hit a stratum whose ch₂ interval is unbounded.
    #[error("unbounded ch2 range in stratum (n_A={n}, d_A={d}, c_A={c}); pass an explicit s range")]
    UnboundedStratum { n: i64, d: i64, c: i64 },
    /// Two independent computations that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}
