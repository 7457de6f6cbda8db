use thiserror::Error;

use crate::newick::NewickError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Newick(#[from] NewickError),

    #[error("leaf count must be at least {min}, got {got}")]
    TooFewLeaves { min: u64, got: u64 },

    #[error("leaf count {got} exceeds the configured cap {cap}")]
    AboveCap { got: u64, cap: u64 },

    #[error("rank must be a positive integer")]
    ZeroRank,

    #[error("log2 ln f(t) is undefined for the single leaf (f = 1)")]
    LeafLogLog,

    #[error("{0}")]
    InvalidArgument(String),
}
