use thiserror::Error;

use crate::Coalition;

/// Largest agent count accepted by anything that materializes all `2^n`
/// coalitions.
pub const ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} needs n <= {limit}, got n = {n}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("coalition bits {bits:#b} out of range for a game with {n} agents")]
    CoalitionOutOfRange { bits: u64, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ratio c(N') / c(N) is undefined because c(N) = 0")]
    UndefinedRatio,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("identity check failed: {0}")]
    IdentityViolated(String),
    #[error("separation oracle returned the grand coalition {0} for a point with x(N) <= c(N)")]
    OracleMisbehaved(Coalition),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_limit(what: &'static str, n: usize) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::LimitExceeded {
            what,
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}
