use num_bigint::BigUint;
use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("predicate set `{label}` queried at {n}, beyond its enumeration cap {cap}")]
    PredicateCapExceeded { label: String, n: BigUint, cap: u64 },

    #[error("no closed form for this query; horizon {horizon} exceeds the enumeration budget {budget}")]
    EnumerationBudgetExceeded { horizon: BigUint, budget: u64 },

    #[error("set has {size} element(s), cannot select element #{k}")]
    IndexBeyondSet { k: BigUint, size: BigUint },

    #[error("infinitude of {what} is unknown")]
    UnknownInfinitude { what: String },

    #[error("cannot pair sets of unequal size: {left} vs {right}")]
    CardinalityMismatch { left: String, right: String },

    #[error("witness set too sparse: counting ratio {ratio} below floor {floor}")]
    WitnessTooSparse { ratio: String, floor: String },

    #[error("no invariance violation found: tail defect max {tail_max} below threshold")]
    NoViolationFound { tail_max: String },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid index sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid measure rule: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Errors caused by hitting a configured computational limit rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::PredicateCapExceeded { .. } | Error::EnumerationBudgetExceeded { .. })
    }
}
