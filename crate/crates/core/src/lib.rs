//! Exact-arithmetic toolkit for asymptotic density on ℕ = {1, 2, 3, …}.
//!
//! * [`nset`]: symbolic subsets of ℕ with exact counting `A(n) = |A ∩ [1, n]|`.
//! * [`asymptotics`]: sampled ratio profiles, limits along index sequences,
//!   density estimates and statistical convergence.
//! * [`perm`]: permutations of ℕ, Lévy-group diagnostics and the pairing
//!   permutations that move one set onto another.
//! * [`measure`]: density-measure surrogates built from subsequence limits,
//!   their axiom/invariance checkers and the block-set counterexample suite.
//! * [`syntax`]: the textual expression grammar shared with the CLI.
//!
//! All values are exact: integers are [`Nat`] (arbitrary precision) and
//! ratios are [`Rat`]. Every limit is a finite-horizon observation along an
//! explicit index sequence, and reports carry the sequence they were taken on.

pub mod asymptotics;
pub mod error;
pub mod measure;
pub mod nset;
pub mod par;
pub mod perm;
pub mod syntax;

pub use error::{Error, Result};
pub use par::Execution;

/// Arbitrary-precision natural number.
pub type Nat = num_bigint::BigUint;
/// Exact rational.
pub type Rat = num_rational::BigRational;

/// Limits shared by every evaluation routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Largest horizon (or element count) any enumeration may touch.
    pub enumeration_budget: u64,
    pub execution: Execution,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { enumeration_budget: nset::DEFAULT_ENUMERATION_BUDGET, execution: Execution::Parallel }
    }
}

impl EvalConfig {
    pub fn sequential() -> Self {
        EvalConfig { execution: Execution::Sequential, ..Self::default() }
    }

    /// Rejects horizons beyond the enumeration budget.
    pub fn check_horizon(&self, n: &Nat) -> Result<u64> {
        use num_traits::ToPrimitive;
        match n.to_u64() {
            Some(k) if k <= self.enumeration_budget => Ok(k),
            _ => Err(Error::EnumerationBudgetExceeded { horizon: n.clone(), budget: self.enumeration_budget }),
        }
    }
}

/// Exact `num/den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Exact `n/d` from naturals.
pub fn ratio(n: &Nat, d: &Nat) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}
