use thiserror::Error;

use crate::subsets::SubsetMask;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=32")]
    GroundSetSize(u32),

    #[error("element {element} is outside the ground set [1, {n}]")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("cannot colex-compare {left} (n={}) with {right} (n={})", left.n(), right.n())]
    InvalidComparison { left: SubsetMask, right: SubsetMask },

    #[error("no {k}-subsets of a {n}-element set")]
    EmptyFamily { n: u32, k: u32 },

    #[error("index {index} out of range for a family of {count} sets")]
    IndexOutOfRange { index: u64, count: u64 },

    #[error("C({n}, {k}) does not fit in 64 bits")]
    Overflow { n: u64, k: u64 },

    #[error("parameters n={n}, d={d} violate the hypothesis {requirement}")]
    Hypothesis { n: u32, d: u32, requirement: &'static str },

    #[error("greedy construction dead-ended at {set}: no admissible image left")]
    GreedyDeadEnd { set: SubsetMask },

    #[error("no complete matching for n={n}, d={d}; this indicates a bug")]
    MatchingFailed { n: u32, d: u32 },

    #[error("poset is empty: {0}")]
    EmptyPoset(String),

    #[error("{what} with n={n} is too large to materialize")]
    TooLarge { what: &'static str, n: u32 },

    #[error("n={n} is outside the solver envelope n <= {max}; pass the large-instance override to proceed")]
    OutsideEnvelope { n: u32, max: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
