//! Permutations of ℕ given by finite rules, with exact forward and inverse
//! evaluation, and the Lévy-group diagnostics built on them.
//!
//! The Lévy group consists of the permutations π with
//! `|{k : k ≤ n < π(k)}| / n → 0`. Three finite-horizon views of that limit
//! are provided: the defect profile, the displacement `(A(n) − (πA)(n))/n`
//! of individual sets, and statistical convergence of `π(n)/n` to 1.

mod diagnostics;
mod pairing;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::Nat;

pub use diagnostics::{
    defect_prefix_counts, displacement_profile, exceptional_sets, image_prefix_counts, levy_defect_profile,
    levy_witness_set, preimage_reach, ratio_stat_report, van_douwen_ratio_report, Classification, DefectMode,
    DefectProfile, DisplacementProfile, ExceptionalSets, RatioStatReport, Thresholds, VanDouwenReport,
};
pub use pairing::{pairing_permutation, restrict_pairing, Pairing, Restriction, PAIR_CACHE};

/// A finite bijection on a finite subset of ℕ, written as disjoint cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    cycles: Vec<Vec<Nat>>,
    forward: BTreeMap<Nat, Nat>,
    backward: BTreeMap<Nat, Nat>,
}

impl FiniteTable {
    /// Each cycle `(a b c)` sends a → b → c → a. Cycles must be disjoint.
    pub fn from_cycles(cycles: Vec<Vec<Nat>>) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        let mut kept = Vec::new();
        for c in cycles {
            if c.iter().any(Zero::is_zero) {
                return Err(Error::InvalidPermutation("table entries must be ≥ 1".into()));
            }
            for (i, a) in c.iter().enumerate() {
                let b = &c[(i + 1) % c.len()];
                if forward.insert(a.clone(), b.clone()).is_some() {
                    return Err(Error::InvalidPermutation(format!("{a} appears in two cycles")));
                }
                backward.insert(b.clone(), a.clone());
            }
            if c.len() > 1 {
                kept.push(c);
            }
        }
        Ok(FiniteTable { cycles: kept, forward, backward })
    }

    pub fn cycles(&self) -> &[Vec<Nat>] {
        &self.cycles
    }
}

/// A bijection of ℕ described by a finite rule.
#[derive(Clone, Debug, PartialEq)]
pub enum PermutationRule {
    Identity,
    FiniteTable(Arc<FiniteTable>),
    /// Swaps the i-th elements of `A ∖ B` and `B ∖ A`; an involution.
    InterlacedPairing(Arc<Pairing>),
    /// For every j ≥ 1 swaps `[4^j, 2·4^j)` with `[2·4^j, 3·4^j)` by ±4^j.
    QuarterBlockSwap,
    /// A pairing that additionally fixes a declared exceptional set.
    Restricted(Arc<Restriction>),
    /// `outer ∘ inner`.
    Compose(Arc<PermutationRule>, Arc<PermutationRule>),
    Inverse(Arc<PermutationRule>),
}

impl PermutationRule {
    pub fn table(cycles: Vec<Vec<Nat>>) -> Result<Self> {
        Ok(PermutationRule::FiniteTable(Arc::new(FiniteTable::from_cycles(cycles)?)))
    }

    pub fn compose(outer: PermutationRule, inner: PermutationRule) -> Self {
        PermutationRule::Compose(Arc::new(outer), Arc::new(inner))
    }

    pub fn inverse(self) -> Self {
        PermutationRule::Inverse(Arc::new(self))
    }

    /// `π(n)`.
    pub fn apply(&self, n: &Nat) -> Result<Nat> {
        check_positive(n)?;
        self.eval(n, false)
    }

    /// `π⁻¹(m)`.
    pub fn invert(&self, m: &Nat) -> Result<Nat> {
        check_positive(m)?;
        self.eval(m, true)
    }

    fn eval(&self, n: &Nat, inverse: bool) -> Result<Nat> {
        match self {
            PermutationRule::Identity => Ok(n.clone()),
            PermutationRule::FiniteTable(t) => {
                let map = if inverse { &t.backward } else { &t.forward };
                Ok(map.get(n).cloned().unwrap_or_else(|| n.clone()))
            }
            PermutationRule::InterlacedPairing(p) => p.apply(n),
            PermutationRule::QuarterBlockSwap => Ok(quarter_swap(n)),
            PermutationRule::Restricted(r) => r.apply(n),
            PermutationRule::Compose(outer, inner) => {
                if inverse {
                    inner.eval(&outer.eval(n, true)?, true)
                } else {
                    outer.eval(&inner.eval(n, false)?, false)
                }
            }
            PermutationRule::Inverse(p) => p.eval(n, !inverse),
        }
    }

    /// Sets whose infinitude or closed-form counting this rule depends on.
    pub fn predicate_cap(&self) -> Option<u64> {
        match self {
            PermutationRule::InterlacedPairing(p) => p.predicate_cap(),
            PermutationRule::Restricted(r) => r.predicate_cap(),
            PermutationRule::Compose(a, b) => match (a.predicate_cap(), b.predicate_cap()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            PermutationRule::Inverse(p) => p.predicate_cap(),
            _ => None,
        }
    }
}

fn check_positive(n: &Nat) -> Result<()> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("permutations act on n ≥ 1".into()));
    }
    Ok(())
}

fn quarter_swap(n: &Nat) -> Nat {
    if *n < Nat::from(4u32) {
        return n.clone();
    }
    let j = (n.bits() - 1) / 2;
    let q = Nat::one() << (2 * j);
    if *n < (&q << 1u32) {
        n + &q
    } else if *n < &q * 3u32 {
        n - &q
    } else {
        n.clone()
    }
}

/// The blocks `[4^j, 2·4^j)` with `4^j ≤ up_to`: the points the quarter-block
/// swap moves upward, exact on `[1, up_to]`.
pub fn lower_quarter_blocks(up_to: u64) -> Result<SymbolicSet> {
    let mut blocks = Vec::new();
    let mut q = 4u64;
    while q <= up_to {
        blocks.push((q, 2 * q));
        q = match q.checked_mul(4) {
            Some(x) => x,
            None => break,
        };
    }
    SymbolicSet::blocks(blocks)
}
