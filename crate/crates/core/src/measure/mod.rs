//! Density-measure surrogates: finite-horizon stand-ins for ultrafilter
//! limits of `A(n)/n`, with checkers for the density-measure axioms and for
//! invariance under permutations.
//!
//! A rule never claims a true measure value. Each report carries the index
//! sequences it was taken on, and a rule whose partial values do not settle
//! within tolerance reports an interval instead of a value.

mod checks;
mod suite;
mod violation;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::asymptotics::{tail_verdict, IndexSequence, LimitReport, LimitVerdict, SampleOptions};
use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::perm::PermutationRule;
use crate::{ratio, Nat, Rat};

pub use checks::{
    check_axioms, check_invariance, equal_measure_test, AxiomCase, AxiomReport, AxiomRow, EqualMeasureReport,
    EqualVerdict, InvarianceReport, InvarianceRow, RowStatus,
};
pub use suite::{counterexample_suite, SuiteConfig, SuiteReport};
pub use violation::{find_invariance_violation, ViolationCertificate};

/// A density-measure surrogate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MeasureRule {
    /// Limit of `A(n)/n` along the sequence.
    SubsequenceLimit(IndexSequence),
    /// `2·lim A(2n)/(2n) − lim A(n)/n` along the sequence.
    BlumlingerCombo(IndexSequence),
    /// Convex combination of non-mixture rules; weights are positive and sum to 1.
    Mixture(Vec<(Rat, MeasureRule)>),
}

impl MeasureRule {
    pub fn sublim(seq: IndexSequence) -> Self {
        MeasureRule::SubsequenceLimit(seq)
    }

    pub fn combo(seq: IndexSequence) -> Self {
        MeasureRule::BlumlingerCombo(seq)
    }

    pub fn mixture(terms: Vec<(Rat, MeasureRule)>) -> Result<Self> {
        let m = MeasureRule::Mixture(terms);
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureRule::SubsequenceLimit(s) | MeasureRule::BlumlingerCombo(s) => s.validate(),
            MeasureRule::Mixture(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidMeasure("mixture needs at least one term".into()));
                }
                let mut total = Rat::zero();
                for (w, m) in terms {
                    if *w <= Rat::zero() {
                        return Err(Error::InvalidMeasure(format!("mixture weight {w} is not positive")));
                    }
                    if matches!(m, MeasureRule::Mixture(_)) {
                        return Err(Error::InvalidMeasure("mixtures nest only one level deep".into()));
                    }
                    m.validate()?;
                    total += w;
                }
                if !total.is_one() {
                    return Err(Error::InvalidMeasure(format!("mixture weights sum to {total}, not 1")));
                }
                Ok(())
            }
        }
    }

    /// Largest point any evaluation of this rule touches.
    pub fn max_point(&self) -> Result<Nat> {
        match self {
            MeasureRule::SubsequenceLimit(s) => s.last_point(),
            MeasureRule::BlumlingerCombo(s) => Ok(s.last_point()? << 1u32),
            MeasureRule::Mixture(terms) => {
                let mut best = Nat::one();
                for (_, m) in terms {
                    best = best.max(m.max_point()?);
                }
                Ok(best)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureVerdict {
    /// The partial values settled within `achieved_tol`.
    Value { value: Rat, achieved_tol: Rat },
    /// The partial values did not settle; their tail range.
    Interval { lo: Rat, hi: Rat },
}

impl MeasureVerdict {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            MeasureVerdict::Value { value, .. } => Some(value),
            MeasureVerdict::Interval { .. } => None,
        }
    }

    pub fn bounds(&self) -> (Rat, Rat) {
        match self {
            MeasureVerdict::Value { value, .. } => (value.clone(), value.clone()),
            MeasureVerdict::Interval { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    fn from_limit(v: LimitVerdict) -> Self {
        match v {
            LimitVerdict::Converged { value, achieved_tol } => MeasureVerdict::Value { value, achieved_tol },
            LimitVerdict::Oscillating { tail_inf, tail_sup } => MeasureVerdict::Interval { lo: tail_inf, hi: tail_sup },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureReport {
    pub rule: MeasureRule,
    pub verdict: MeasureVerdict,
    /// Base evaluation points (empty for mixtures over different sequences).
    pub points: Vec<Nat>,
    /// The rule's value at each point: `A(n)/n` for a subsequence limit,
    /// `2·A(2n)/(2n) − A(n)/n` for a combination, the weighted sum for a
    /// mixture whose terms have equally many points (otherwise empty).
    pub partials: Vec<Rat>,
    pub tail_window: usize,
    /// Constituent limits: the base sequence, then the doubled one for a combination.
    pub limits: Vec<LimitReport>,
    pub terms: Vec<(Rat, MeasureReport)>,
}

/// What is being measured: a set, or the image of a set under a permutation.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Set(&'a SymbolicSet),
    Image(&'a PermutationRule, &'a SymbolicSet),
}

impl Target<'_> {
    /// Counting function at each point. Images use a closed form when the
    /// permutation maps the set onto a describable set, otherwise one
    /// inverse-evaluation sweep up to the largest point.
    pub fn counts(&self, points: &[Nat], opts: &SampleOptions) -> Result<Vec<Nat>> {
        let set = match self {
            Target::Set(s) => Some((*s).clone()),
            Target::Image(pi, s) => image_closed_form(pi, s)?,
        };
        let budget = opts.eval.enumeration_budget;
        if let Some(s) = set {
            return crate::par::try_map(opts.eval.execution, points, |n| s.count_with(n, budget));
        }
        let Target::Image(pi, s) = self else { unreachable!() };
        let Some(top) = points.iter().max() else { return Ok(Vec::new()) };
        let horizon = opts.eval.check_horizon(top)?;
        let prefix = crate::perm::image_prefix_counts(pi, s, horizon, &opts.eval)?;
        Ok(points.iter().map(|n| Nat::from(prefix[n.to_usize().expect("within horizon")])).collect())
    }

    fn ratios(&self, points: &[Nat], opts: &SampleOptions) -> Result<Vec<Rat>> {
        let counts = self.counts(points, opts)?;
        Ok(counts.iter().zip(points).map(|(c, n)| ratio(c, n)).collect())
    }
}

/// `πA` as a symbolic set, when the rule's structure gives it directly.
pub fn image_closed_form(pi: &PermutationRule, a: &SymbolicSet) -> Result<Option<SymbolicSet>> {
    Ok(match pi {
        PermutationRule::Identity => Some(a.clone()),
        PermutationRule::InterlacedPairing(p) => {
            let (x, y) = p.sources();
            if a == x {
                Some(y.clone())
            } else if a == y {
                Some(x.clone())
            } else if a == p.left() {
                Some(p.right().clone())
            } else if a == p.right() {
                Some(p.left().clone())
            } else {
                None
            }
        }
        PermutationRule::FiniteTable(t) => {
            let support: Vec<Nat> = t.cycles().iter().flatten().cloned().collect();
            let mut moved = Vec::new();
            for x in &support {
                if a.contains(x)? {
                    moved.push(pi.apply(x)?);
                }
            }
            let rest = a.clone().diff(SymbolicSet::finite(support)?);
            Some(if moved.is_empty() { rest } else { rest.union(SymbolicSet::finite(moved)?) })
        }
        PermutationRule::Compose(outer, inner) => match image_closed_form(inner, a)? {
            Some(b) => image_closed_form(outer, &b)?,
            None => None,
        },
        PermutationRule::Inverse(inner) => match inner.as_ref() {
            PermutationRule::InterlacedPairing(_) | PermutationRule::QuarterBlockSwap | PermutationRule::Identity => {
                image_closed_form(inner, a)?
            }
            _ => None,
        },
        PermutationRule::QuarterBlockSwap | PermutationRule::Restricted(_) => None,
    })
}

/// Evaluates the surrogate on a set.
pub fn evaluate(mu: &MeasureRule, a: &SymbolicSet, tol: &Rat, opts: &SampleOptions) -> Result<MeasureReport> {
    evaluate_target(mu, Target::Set(a), tol, opts)
}

/// Evaluates the surrogate on a set or on the image of a set.
pub fn evaluate_target(mu: &MeasureRule, target: Target<'_>, tol: &Rat, opts: &SampleOptions) -> Result<MeasureReport> {
    mu.validate()?;
    match mu {
        MeasureRule::SubsequenceLimit(seq) => {
            let base = limit_report(target, seq, tol, opts)?;
            Ok(MeasureReport {
                rule: mu.clone(),
                verdict: MeasureVerdict::from_limit(base.verdict.clone()),
                points: base.points.clone(),
                partials: base.values.clone(),
                tail_window: base.tail_window,
                limits: vec![base],
                terms: Vec::new(),
            })
        }
        MeasureRule::BlumlingerCombo(seq) => {
            let base = limit_report(target, seq, tol, opts)?;
            let doubled = limit_report(target, &seq.clone().doubled(), tol, opts)?;
            let two = Rat::from_integer(BigInt::from(2));
            let partials: Vec<Rat> = doubled.values.iter().zip(&base.values).map(|(d, b)| &two * d - b).collect();
            let tail_window = opts.tail_len(partials.len());
            let verdict = MeasureVerdict::from_limit(tail_verdict(&partials, tail_window, tol)?);
            Ok(MeasureReport {
                rule: mu.clone(),
                verdict,
                points: base.points.clone(),
                partials,
                tail_window,
                limits: vec![base, doubled],
                terms: Vec::new(),
            })
        }
        MeasureRule::Mixture(terms) => {
            let reports = crate::par::try_map(opts.eval.execution, terms, |(w, m)| {
                Ok::<_, Error>((w.clone(), evaluate_target(m, target, tol, opts)?))
            })?;
            let verdict = if reports.iter().all(|(_, r)| r.verdict.value().is_some()) {
                let mut value = Rat::zero();
                let mut achieved_tol = Rat::zero();
                for (w, r) in &reports {
                    if let MeasureVerdict::Value { value: v, achieved_tol: t } = &r.verdict {
                        value += w * v;
                        achieved_tol += w * t;
                    }
                }
                MeasureVerdict::Value { value, achieved_tol }
            } else {
                let (mut lo, mut hi) = (Rat::zero(), Rat::zero());
                for (w, r) in &reports {
                    let (l, h) = r.verdict.bounds();
                    lo += w * l;
                    hi += w * h;
                }
                MeasureVerdict::Interval { lo, hi }
            };
            let len = reports[0].1.partials.len();
            let aligned = reports.iter().all(|(_, r)| r.partials.len() == len);
            let partials = if aligned {
                (0..len).map(|i| reports.iter().map(|(w, r)| w * &r.partials[i]).sum()).collect()
            } else {
                Vec::new()
            };
            let same_points = reports.iter().all(|(_, r)| r.points == reports[0].1.points);
            let points = if same_points { reports[0].1.points.clone() } else { Vec::new() };
            let tail_window = opts.tail_len(partials.len().max(1));
            Ok(MeasureReport {
                rule: mu.clone(),
                verdict,
                points,
                partials,
                tail_window,
                limits: Vec::new(),
                terms: reports,
            })
        }
    }
}

fn limit_report(target: Target<'_>, seq: &IndexSequence, tol: &Rat, opts: &SampleOptions) -> Result<LimitReport> {
    let points = seq.points()?;
    let values = target.ratios(&points, opts)?;
    let tail_window = opts.tail_len(values.len());
    let verdict = tail_verdict(&values, tail_window, tol)?;
    Ok(LimitReport { sequence: seq.clone(), points, values, verdict, tail_window })
}
