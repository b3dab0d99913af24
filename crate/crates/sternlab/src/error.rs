use crate::{Int, Nat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(u32),

    #[error("inverted range: lo = {lo} > hi = {hi}")]
    InvertedRange { lo: Nat, hi: Nat },

    #[error("sweep would visit {needed} values, cap is {cap}")]
    CapExceeded { needed: Nat, cap: u64 },

    #[error("over-expansions of 0 are not defined")]
    ZeroTarget,

    #[error("parameters out of range: {0}")]
    Domain(String),

    #[error("expression {0} is not divisible by 5")]
    NonIntegral(Int),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Reject bases below 2.
pub(crate) fn check_base(base: u32) -> crate::Result<()> {
    if base < 2 {
        Err(Error::BaseTooSmall(base))
    } else {
        Ok(())
    }
}
