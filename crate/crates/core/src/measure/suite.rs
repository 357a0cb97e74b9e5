//! The block-set counterexamples: a combination measure that gives the
//! double-exponential block set `A = ⋃ [2^(2^i), 2·2^(2^i))` measure 1 while
//! its upper density is 1/2, gives `2A` measure 0, and ranks A above a set
//! that dominates it pointwise.

use num_traits::{One, Signed, Zero};

use super::{evaluate, MeasureReport, MeasureRule};
use crate::asymptotics::{IndexSequence, SampleOptions};
use crate::error::{Error, Result};
use crate::nset::{dexp_interval, SymbolicSet};
use crate::{rat, ratio, Nat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Number of double-exponential points `2^(2^i)`, `i = 1..=K`.
    pub dexp_terms: u32,
    pub tol: Rat,
    /// The pointwise domination `B(n) ≥ A(n)` is checked for every `n` up to here.
    pub pointwise_limit: u64,
    /// Sequences whose subsequence limits and mixtures are checked for
    /// monotonicity and scaling.
    pub seq_corpus: Vec<IndexSequence>,
}

impl SuiteConfig {
    pub fn new(dexp_terms: u32) -> Result<Self> {
        let d = IndexSequence::dexp(dexp_terms)?;
        Ok(SuiteConfig {
            dexp_terms,
            tol: rat(1, 1000),
            pointwise_limit: 1_000_000,
            seq_corpus: vec![d.clone(), d.doubled(), IndexSequence::geometric(8u64, 16, dexp_terms)?],
        })
    }
}

/// `(i, n, value)` rows.
pub type Partials = Vec<(u32, Nat, Rat)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureAboveUpperDensity {
    /// Combination partials for A at `n = 2^(2^i)`: exactly `(n − 1)/n`.
    pub partials: Partials,
    pub report: MeasureReport,
    /// `A(e)/e` at block ends `e = 2·2^(2^i) − 1`, the local maxima of `A(n)/n`.
    pub upper_density: Partials,
    /// Last partial exceeds the last upper-density estimate by more than tol.
    pub measure_exceeds_upper_density: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingFailure {
    /// Combination partials for 2A at `n = 2^(2^i)`: exactly `1/n` for i ≥ 2.
    pub partials: Partials,
    pub report: MeasureReport,
    /// `½ ·` the last combination partial of A, the value scaling would require.
    pub expected: Rat,
    /// Points where `A(n)/(2A)(2n)` was checked.
    pub grid: Vec<Nat>,
    /// `A(n) = (2A)(2n)` at every grid point with `A(n) > 0`.
    pub ratio_identity_holds: bool,
    pub scaling_fails: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityFailure {
    pub dominating: SymbolicSet,
    pub checked_up_to: u64,
    /// `B(n) ≥ A(n)` for every `n ≤ checked_up_to`.
    pub pointwise_holds: bool,
    pub first_violation: Option<u64>,
    /// `(e, A(e)/e)` at block ends beyond 31; all at most 20/31 and
    /// non-increasing means `A(n) ≤ 20n/31 < 3n/4 ≤ B(n)` for every `n ≥ 31`.
    pub block_ends: Vec<(Nat, Rat)>,
    pub tail_bound_holds: bool,
    pub density: Rat,
    pub report: MeasureReport,
    /// Last combination partial of A.
    pub measure_of_a: Rat,
    pub monotonicity_fails: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichCheck {
    /// Number of `(set, n)` pairs checked.
    pub points: usize,
    /// `S(n) ≤ S(2n) ≤ S(n) + n` at every evaluated point.
    pub holds: bool,
    /// Every combination partial lies in `[0, 1]`.
    pub partials_in_unit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixtureCheck {
    pub rule: MeasureRule,
    /// Partials of A never exceed those of the dominating set (nor those of
    /// 2A those of A).
    pub monotone: bool,
    /// `|μ(2A) − ½μ(A)|` between the values at the last point.
    pub scaling_gap: Rat,
    pub scaling_holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub measure_above_upper_density: MeasureAboveUpperDensity,
    pub scaling_failure: ScalingFailure,
    pub monotonicity_failure: MonotonicityFailure,
    pub sandwich: SandwichCheck,
    pub mixtures: Vec<MixtureCheck>,
}

pub fn counterexample_suite(config: &SuiteConfig, opts: &SampleOptions) -> Result<SuiteReport> {
    let k = config.dexp_terms;
    let tol = &config.tol;
    let seq = IndexSequence::dexp(k)?;
    let combo = MeasureRule::combo(seq.clone());
    let a = SymbolicSet::dexp_blocks();
    let two_a = a.scale(2)?;
    let b = SymbolicSet::periodic(4, [1, 2, 3])?;

    let ra = evaluate(&combo, &a, tol, opts)?;
    let r2a = evaluate(&combo, &two_a, tol, opts)?;
    let rb = evaluate(&combo, &b, tol, opts)?;
    let rows = |r: &MeasureReport| -> Partials {
        r.points.iter().zip(&r.partials).enumerate().map(|(i, (n, v))| (i as u32 + 1, n.clone(), v.clone())).collect()
    };
    let last = |r: &MeasureReport| r.partials.last().cloned().expect("nonempty");

    let mut upper_density = Vec::new();
    for i in 1..=k {
        let (_, end) = dexp_interval(i);
        let e = end - 1u32;
        upper_density.push((i, e.clone(), ratio(&a.count(&e)?, &e)));
    }
    let ud_last = upper_density.last().map(|r| r.2.clone()).expect("K ≥ 1");
    let item1 = MeasureAboveUpperDensity {
        partials: rows(&ra),
        measure_exceeds_upper_density: last(&ra) > &ud_last + tol,
        upper_density,
        report: ra.clone(),
    };

    let mut grid: Vec<Nat> = (1..=1000u64).map(Nat::from).collect();
    for i in 1..=k {
        let (l, r) = dexp_interval(i);
        grid.extend([l.clone(), &l << 1u32, &r - 1u32, r]);
    }
    grid.sort();
    grid.dedup();
    let mut ratio_identity_holds = true;
    for n in &grid {
        let c = a.count(n)?;
        if !c.is_zero() && c != two_a.count(&(n << 1u32))? {
            ratio_identity_holds = false;
        }
    }
    let expected = last(&ra) / Rat::from_integer(2.into());
    let item2 = ScalingFailure {
        partials: rows(&r2a),
        scaling_fails: ratio_identity_holds && (last(&r2a) - &expected).abs() > *tol,
        expected,
        grid,
        ratio_identity_holds,
        report: r2a.clone(),
    };

    let (pointwise_holds, first_violation) = dominates(&b, &a, config.pointwise_limit)?;
    let bar = rat(20, 31);
    let mut block_ends = Vec::new();
    for i in 2..=k + 2 {
        let (_, end) = dexp_interval(i);
        let e = end - 1u32;
        block_ends.push((e.clone(), ratio(&a.count(&e)?, &e)));
    }
    let tail_bound_holds =
        block_ends.iter().all(|(_, r)| *r <= bar) && block_ends.windows(2).all(|w| w[1].1 <= w[0].1) && bar < rat(3, 4);
    let density = b.density_closed_form().ok_or_else(|| Error::InvalidSet("expected a periodic set".into()))?;
    let measure_of_a = last(&ra);
    let b_value = rb.verdict.value().cloned();
    let item3 = MonotonicityFailure {
        dominating: b.clone(),
        checked_up_to: config.pointwise_limit,
        pointwise_holds,
        first_violation,
        block_ends,
        tail_bound_holds,
        monotonicity_fails: pointwise_holds && tail_bound_holds && b_value.is_some_and(|v| v + tol < measure_of_a),
        density,
        report: rb.clone(),
        measure_of_a,
    };

    let mut points = 0usize;
    let mut holds = true;
    for (r, set) in [(&ra, &a), (&r2a, &two_a), (&rb, &b)] {
        for n in r.limits.iter().flat_map(|l| l.points.iter()) {
            let c = set.count(n)?;
            let c2 = set.count(&(n << 1u32))?;
            holds &= c <= c2 && c2 <= &c + n;
            points += 1;
        }
    }
    let partials_in_unit =
        [&ra, &r2a, &rb].iter().flat_map(|r| r.partials.iter()).all(|p| !p.is_negative() && *p <= Rat::one());
    let item4 = SandwichCheck { points, holds, partials_in_unit };

    let mut rules: Vec<MeasureRule> = config.seq_corpus.iter().cloned().map(MeasureRule::sublim).collect();
    if config.seq_corpus.len() >= 2 {
        let n = config.seq_corpus.len() as i64;
        let even = config.seq_corpus.iter().cloned().map(|s| (rat(1, n), MeasureRule::sublim(s))).collect();
        rules.push(MeasureRule::mixture(even)?);
        rules.push(MeasureRule::mixture(vec![
            (rat(1, 2), MeasureRule::sublim(config.seq_corpus[0].clone())),
            (rat(1, 2), MeasureRule::sublim(config.seq_corpus[1].clone())),
        ])?);
    }
    let mut mixtures = Vec::new();
    for rule in rules {
        let ma = evaluate(&rule, &a, tol, opts)?;
        let mb = evaluate(&rule, &b, tol, opts)?;
        let m2a = evaluate(&rule, &two_a, tol, opts)?;
        let below = |x: &MeasureReport, y: &MeasureReport| x.partials.iter().zip(&y.partials).all(|(p, q)| p <= q);
        let monotone = below(&ma, &mb) && below(&m2a, &ma);
        let two = Rat::from_integer(2.into());
        let (pa, p2a) = (ma.partials.last(), m2a.partials.last());
        let scaling_gap = match (pa, p2a) {
            (Some(x), Some(y)) => (y - x / &two).abs(),
            _ => return Err(Error::InvalidMeasure(format!("{rule} has no aligned partial values"))),
        };
        mixtures.push(MixtureCheck { rule, monotone, scaling_holds: scaling_gap <= *tol, scaling_gap });
    }

    Ok(SuiteReport {
        config: config.clone(),
        measure_above_upper_density: item1,
        scaling_failure: item2,
        monotonicity_failure: item3,
        sandwich: item4,
        mixtures,
    })
}

/// Whether `big(n) ≥ small(n)` for every `n ≤ limit`, by a running count.
fn dominates(big: &SymbolicSet, small: &SymbolicSet, limit: u64) -> Result<(bool, Option<u64>)> {
    let (mut cb, mut cs) = (0u64, 0u64);
    for n in 1..=limit {
        let x = Nat::from(n);
        cb += big.contains(&x)? as u64;
        cs += small.contains(&x)? as u64;
        if cb < cs {
            return Ok((false, Some(n)));
        }
    }
    Ok((true, None))
}
