//! Ratio profiles `A(n)/n`, limits along index sequences, density estimates
//! and statistical convergence.
//!
//! Nothing here certifies a true limit. A [`LimitReport`] says how the exact
//! values behave over the tail of a declared finite sequence, and a
//! [`DensityReport`] gives the extremes of `A(n)/n` over a sample grid.

mod sequence;
mod statistical;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::par;
use crate::{ratio, EvalConfig, Nat, Rat};

pub use sequence::{IndexSequence, MAX_DEXP_TERMS};
pub use statistical::{
    full_density_witness, statistical_limit, FridySchedule, FridyStage, FridyWitness, IndexRule, StatReport, StatRow,
};

/// Shared knobs for sampled evaluations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleOptions {
    /// Number of trailing points judged for convergence; `None` means the
    /// last ⌈len/2⌉ points.
    pub tail_window: Option<usize>,
    pub eval: EvalConfig,
}

impl SampleOptions {
    pub fn tail_len(&self, len: usize) -> usize {
        match self.tail_window {
            Some(w) => w.clamp(1, len.max(1)),
            None => len.div_ceil(2).max(1),
        }
    }
}

/// Exact `(n, A(n)/n)` at every point of the sequence.
pub fn ratio_profile(set: &SymbolicSet, seq: &IndexSequence, eval: &EvalConfig) -> Result<Vec<(Nat, Rat)>> {
    let points = seq.points()?;
    ratio_at(set, &points, eval)
}

pub(crate) fn ratio_at(set: &SymbolicSet, points: &[Nat], eval: &EvalConfig) -> Result<Vec<(Nat, Rat)>> {
    let budget = eval.enumeration_budget;
    par::try_map(eval.execution, points, |n| {
        if n.is_zero() {
            return Err(Error::InvalidArgument("ratio A(n)/n needs n ≥ 1".into()));
        }
        let c = set.count_with(n, budget)?;
        Ok((n.clone(), ratio(&c, n)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitVerdict {
    /// Tail oscillation within tolerance; `value` is the last sampled value.
    Converged {
        value: Rat,
        achieved_tol: Rat,
    },
    Oscillating {
        tail_inf: Rat,
        tail_sup: Rat,
    },
}

impl LimitVerdict {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LimitVerdict::Converged { value, .. } => Some(value),
            LimitVerdict::Oscillating { .. } => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, LimitVerdict::Converged { .. })
    }
}

/// Judges a sampled sequence by the spread of its last `tail` values.
pub fn tail_verdict(values: &[Rat], tail: usize, tol: &Rat) -> Result<LimitVerdict> {
    let Some(last) = values.last() else {
        return Err(Error::InvalidArgument("no sampled values".into()));
    };
    let tail = &values[values.len() - tail.clamp(1, values.len())..];
    let (lo, hi) = min_max(tail).expect("tail is nonempty");
    let spread = hi - lo;
    if &spread <= tol {
        Ok(LimitVerdict::Converged { value: last.clone(), achieved_tol: spread })
    } else {
        Ok(LimitVerdict::Oscillating { tail_inf: lo.clone(), tail_sup: hi.clone() })
    }
}

pub(crate) fn min_max(values: &[Rat]) -> Option<(&Rat, &Rat)> {
    let mut it = values.iter();
    let first = it.next()?;
    Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub sequence: IndexSequence,
    pub points: Vec<Nat>,
    pub values: Vec<Rat>,
    pub verdict: LimitVerdict,
    pub tail_window: usize,
}

/// Finite-horizon surrogate of the ultrafilter limit of `A(n)/n`.
pub fn limit_along(set: &SymbolicSet, seq: &IndexSequence, tol: &Rat, opts: &SampleOptions) -> Result<LimitReport> {
    let profile = ratio_profile(set, seq, &opts.eval)?;
    let (points, values): (Vec<Nat>, Vec<Rat>) = profile.into_iter().unzip();
    let tail_window = opts.tail_len(values.len());
    let verdict = tail_verdict(&values, tail_window, tol)?;
    Ok(LimitReport { sequence: seq.clone(), points, values, verdict, tail_window })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    /// Minimum of `A(n)/n` over the sample grid.
    pub lower: Rat,
    /// Maximum of `A(n)/n` over the sample grid.
    pub upper: Rat,
    /// Exact density for eventually periodic sets.
    pub exact: Option<Rat>,
    /// `A(horizon)/horizon`, reported when `upper − lower ≤ tol`.
    pub approx: Option<Rat>,
    pub horizon: Nat,
    pub tail_start: Nat,
    pub samples: Vec<(Nat, Rat)>,
}

/// Lower/upper estimates of `A(n)/n` over `[tail_start, horizon]`.
///
/// The grid holds the window ends, powers of two, and the first and last
/// index of every piece of the set's periodic decomposition. On sets made of
/// full and empty pieces the ratio is monotone on each piece, so the
/// estimates are then the exact extremes over the window.
pub fn density(
    set: &SymbolicSet,
    horizon: &Nat,
    tail_start: &Nat,
    tol: &Rat,
    eval: &EvalConfig,
) -> Result<DensityReport> {
    if tail_start.is_zero() || tail_start >= horizon {
        return Err(Error::InvalidArgument(format!(
            "tail window start {tail_start} must satisfy 1 ≤ start < horizon {horizon}"
        )));
    }
    let grid = sample_grid(std::slice::from_ref(set), tail_start, horizon, eval)?;
    let samples = ratio_at(set, &grid, eval)?;
    let values: Vec<Rat> = samples.iter().map(|(_, v)| v.clone()).collect();
    let (lo, hi) = min_max(&values).expect("grid holds the window ends");
    let (lower, upper) = (lo.clone(), hi.clone());
    let approx = (&upper - &lower <= *tol).then(|| values.last().cloned().expect("nonempty"));
    Ok(DensityReport {
        lower,
        upper,
        exact: set.density_closed_form(),
        approx,
        horizon: horizon.clone(),
        tail_start: tail_start.clone(),
        samples,
    })
}

/// Uniformly spaced points added for sets without a piece decomposition.
const PREDICATE_GRID: u64 = 256;

/// Sorted sample grid over `[lo, hi]` adapted to the structure of `sets`.
pub fn sample_grid(sets: &[SymbolicSet], lo: &Nat, hi: &Nat, eval: &EvalConfig) -> Result<Vec<Nat>> {
    let mut grid: BTreeSet<Nat> = BTreeSet::new();
    grid.insert(lo.clone());
    grid.insert(hi.clone());
    let mut p = Nat::one() << (lo.bits().saturating_sub(1));
    while &p <= hi {
        if &p >= lo {
            grid.insert(p.clone());
        }
        p <<= 1u32;
    }
    for s in sets {
        match s.breakpoints(lo, hi, eval.enumeration_budget)? {
            Some(b) => grid.extend(b.into_iter().filter(|x| x >= lo && x <= hi)),
            None => {
                let span: Nat = hi - lo;
                for i in 1..PREDICATE_GRID {
                    grid.insert(lo + &span * i / PREDICATE_GRID);
                }
            }
        }
    }
    Ok(grid.into_iter().collect())
}

/// `|a − b|`.
pub(crate) fn abs_diff(a: &Rat, b: &Rat) -> Rat {
    (a - b).abs()
}
