use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{evaluate, evaluate_target, MeasureReport, MeasureRule, Target};
use crate::asymptotics::{sample_grid, IndexSequence, SampleOptions};
use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::perm::PermutationRule;
use crate::{Nat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Pass,
    Fail,
    /// Some constituent did not settle, so the row can neither pass nor fail.
    Inconclusive,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Inconclusive => "Inconclusive",
        }
    }

    fn combine(cases: &[AxiomCase], tol: &Rat) -> RowStatus {
        if cases.iter().any(|c| c.deviation.as_ref().is_some_and(|d| d > tol) || c.exact_partials == Some(false)) {
            RowStatus::Fail
        } else if cases.iter().any(|c| c.deviation.is_none()) {
            RowStatus::Inconclusive
        } else {
            RowStatus::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCase {
    pub label: String,
    /// `None` when a constituent value did not settle or no density is known.
    pub deviation: Option<Rat>,
    /// Additivity only: whether the partial values add up exactly point by point.
    pub exact_partials: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomRow {
    pub status: RowStatus,
    pub max_deviation: Option<Rat>,
    pub cases: Vec<AxiomCase>,
}

impl AxiomRow {
    fn new(cases: Vec<AxiomCase>, tol: &Rat) -> Self {
        let max_deviation = cases.iter().filter_map(|c| c.deviation.clone()).max();
        AxiomRow { status: RowStatus::combine(&cases, tol), max_deviation, cases }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub rule: MeasureRule,
    pub tol: Rat,
    /// `|μ(ℕ) − 1|`.
    pub normalization: AxiomRow,
    /// `|μ(A ∪ B) − μ(A) − μ(B)|` over disjoint pairs.
    pub additivity: AxiomRow,
    /// `|μ(A) − d(A)|` over sets with a density.
    pub extension: AxiomRow,
    pub pass: bool,
}

/// Checks normalization, finite additivity and extension of density.
///
/// `corpus` pairs each set with its density; `None` falls back to the
/// closed-form density, and a set with neither makes its case inconclusive.
pub fn check_axioms(
    mu: &MeasureRule,
    corpus: &[(SymbolicSet, Option<Rat>)],
    disjoint_pairs: &[(SymbolicSet, SymbolicSet)],
    tol: &Rat,
    opts: &SampleOptions,
) -> Result<AxiomReport> {
    let top = mu.max_point()?;
    let full = evaluate(mu, &SymbolicSet::Full, tol, opts)?;
    let normalization = AxiomRow::new(
        vec![AxiomCase {
            label: "full".into(),
            deviation: full.verdict.value().map(|v| (v - Rat::one()).abs()),
            exact_partials: None,
        }],
        tol,
    );

    let mut add_cases = Vec::new();
    for (a, b) in disjoint_pairs {
        let overlap = a.clone().intersect(b.clone()).count_with(&top, opts.eval.enumeration_budget)?;
        if !overlap.is_zero() {
            return Err(Error::InvalidArgument(format!("{a} and {b} share {overlap} element(s) below {top}")));
        }
        let ra = evaluate(mu, a, tol, opts)?;
        let rb = evaluate(mu, b, tol, opts)?;
        let ru = evaluate(mu, &a.clone().union(b.clone()), tol, opts)?;
        let exact = (!ru.partials.is_empty()).then(|| {
            ru.partials.len() == ra.partials.len()
                && ru.partials.iter().zip(ra.partials.iter().zip(&rb.partials)).all(|(u, (x, y))| *u == x + y)
        });
        let deviation = match (ra.verdict.value(), rb.verdict.value(), ru.verdict.value()) {
            (Some(x), Some(y), Some(u)) => Some((u - x - y).abs()),
            _ => None,
        };
        add_cases.push(AxiomCase { label: format!("{a} ⊔ {b}"), deviation, exact_partials: exact });
    }
    let additivity = AxiomRow::new(add_cases, tol);

    let mut ext_cases = Vec::new();
    for (s, d) in corpus {
        let d = d.clone().or_else(|| s.density_closed_form());
        let r = evaluate(mu, s, tol, opts)?;
        let deviation = match (d, r.verdict.value()) {
            (Some(d), Some(v)) => Some((v - d).abs()),
            _ => None,
        };
        ext_cases.push(AxiomCase { label: s.to_string(), deviation, exact_partials: None });
    }
    let extension = AxiomRow::new(ext_cases, tol);
    let pass = [&normalization, &additivity, &extension].iter().all(|r| r.status == RowStatus::Pass);
    Ok(AxiomReport { rule: mu.clone(), tol: tol.clone(), normalization, additivity, extension, pass })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceRow {
    pub label: String,
    pub set: MeasureReport,
    pub image: MeasureReport,
    /// `|μ(πA) − μ(A)|` when both values settled.
    pub deviation: Option<Rat>,
    /// Range of `|partial(πA) − partial(A)|` over the tail window.
    pub partial_gap: Option<(Rat, Rat)>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub rule: MeasureRule,
    pub tol: Rat,
    pub rows: Vec<InvarianceRow>,
    pub max_deviation: Option<Rat>,
    pub status: RowStatus,
}

/// Compares `μ(πA)` with `μ(A)` for every set of the corpus.
///
/// A row fails when the settled values differ by more than `tol`, or when
/// the partial values stay more than `tol` apart over the whole tail.
pub fn check_invariance(
    mu: &MeasureRule,
    pi: &PermutationRule,
    corpus: &[SymbolicSet],
    tol: &Rat,
    opts: &SampleOptions,
) -> Result<InvarianceReport> {
    let mut rows = Vec::new();
    for a in corpus {
        let set = evaluate(mu, a, tol, opts)?;
        let image = evaluate_target(mu, Target::Image(pi, a), tol, opts)?;
        let deviation = match (set.verdict.value(), image.verdict.value()) {
            (Some(x), Some(y)) => Some((x - y).abs()),
            _ => None,
        };
        let partial_gap = (!set.partials.is_empty() && set.partials.len() == image.partials.len()).then(|| {
            let from = set.partials.len() - set.tail_window;
            let gaps: Vec<Rat> =
                set.partials[from..].iter().zip(&image.partials[from..]).map(|(x, y)| (x - y).abs()).collect();
            (gaps.iter().min().cloned().unwrap_or_default(), gaps.iter().max().cloned().unwrap_or_default())
        });
        let status = match (&deviation, &partial_gap) {
            (Some(d), _) if d > tol => RowStatus::Fail,
            (Some(_), _) => RowStatus::Pass,
            (None, Some((lo, _))) if lo > tol => RowStatus::Fail,
            _ => RowStatus::Inconclusive,
        };
        rows.push(InvarianceRow { label: a.to_string(), set, image, deviation, partial_gap, status });
    }
    let max_deviation = rows.iter().filter_map(|r| r.deviation.clone()).max();
    let status = if rows.iter().any(|r| r.status == RowStatus::Fail) {
        RowStatus::Fail
    } else if rows.iter().all(|r| r.status == RowStatus::Pass) {
        RowStatus::Pass
    } else {
        RowStatus::Inconclusive
    };
    Ok(InvarianceReport { rule: mu.clone(), tol: tol.clone(), rows, max_deviation, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EqualVerdict {
    EquivalentLikely,
    Different,
}

impl EqualVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EqualVerdict::EquivalentLikely => "EquivalentLikely",
            EqualVerdict::Different => "Different",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualMeasureReport {
    pub tail_start: Nat,
    pub horizon: Nat,
    /// `(n, (A(n) − B(n))/n)` over the checkpoint grid.
    pub grid: Vec<(Nat, Rat)>,
    /// Largest `|A(n) − B(n)|/n` on the grid.
    pub grid_sup: Rat,
    pub grid_argmax: Nat,
    /// Per sequence: largest `|A(n) − B(n)|/n` over its tail points at or
    /// beyond `tail_start` (the last point if none are), which bounds
    /// `|μ(A) − μ(B)|` for the subsequence-limit surrogate.
    pub per_sequence: Vec<(IndexSequence, Rat)>,
    pub tol: Rat,
    pub verdict: EqualVerdict,
}

/// Whether `(A(n) − B(n))/n → 0`, the condition for every density measure
/// to give A and B the same value.
pub fn equal_measure_test(
    a: &SymbolicSet,
    b: &SymbolicSet,
    seq_corpus: &[IndexSequence],
    horizon: &Nat,
    tail_start: &Nat,
    tol: &Rat,
    opts: &SampleOptions,
) -> Result<EqualMeasureReport> {
    if tail_start.is_zero() || tail_start >= horizon {
        return Err(Error::InvalidArgument(format!(
            "tail window start {tail_start} must satisfy 1 ≤ start < horizon {horizon}"
        )));
    }
    let points = sample_grid(&[a.clone(), b.clone()], tail_start, horizon, &opts.eval)?;
    let grid = differences(a, b, &points, opts)?;
    let (grid_argmax, grid_sup) = grid
        .iter()
        .map(|(n, d)| (n.clone(), d.abs()))
        .fold(None, |best: Option<(Nat, Rat)>, (n, d)| match best {
            Some((bn, bd)) if bd >= d => Some((bn, bd)),
            _ => Some((n, d)),
        })
        .expect("grid holds the window ends");
    let mut per_sequence = Vec::new();
    for seq in seq_corpus {
        let pts = seq.points()?;
        let diffs = differences(a, b, &pts, opts)?;
        // Points below the tail window say nothing about the limit.
        let late = pts.iter().filter(|n| *n >= tail_start).count();
        let tail = opts.tail_len(diffs.len()).min(late).max(1);
        let worst = diffs[diffs.len() - tail..].iter().map(|(_, d)| d.abs()).max().unwrap_or_default();
        per_sequence.push((seq.clone(), worst));
    }
    let equal = grid_sup <= *tol && per_sequence.iter().all(|(_, d)| d <= tol);
    Ok(EqualMeasureReport {
        tail_start: tail_start.clone(),
        horizon: horizon.clone(),
        grid,
        grid_sup,
        grid_argmax,
        per_sequence,
        tol: tol.clone(),
        verdict: if equal { EqualVerdict::EquivalentLikely } else { EqualVerdict::Different },
    })
}

fn differences(a: &SymbolicSet, b: &SymbolicSet, points: &[Nat], opts: &SampleOptions) -> Result<Vec<(Nat, Rat)>> {
    let ca = Target::Set(a).counts(points, opts)?;
    let cb = Target::Set(b).counts(points, opts)?;
    Ok(points
        .iter()
        .zip(ca.iter().zip(&cb))
        .map(|(n, (x, y))| {
            let d = BigInt::from(x.clone()) - BigInt::from(y.clone());
            (n.clone(), Rat::new(d, BigInt::from(n.clone())))
        })
        .collect())
}
