use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::PermutationRule;
use crate::asymptotics::{statistical_limit, IndexSequence, SampleOptions, StatReport};
use crate::error::{Error, Result};
use crate::nset::{PredicateSet, SymbolicSet};
use crate::par;
use crate::{rat, ratio, EvalConfig, Nat, Rat};

/// Finite-horizon verdict on membership in the Lévy group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    LevyLikely,
    NonLevyLikely,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::LevyLikely => "LevyLikely",
            Classification::NonLevyLikely => "NonLevyLikely",
            Classification::Inconclusive => "Inconclusive",
        }
    }
}

/// Tail thresholds turning a sampled profile into a [`Classification`].
///
/// LevyLikely: the tail maximum is at most `levy · slack` and the last
/// point is at least `min_horizon`. NonLevyLikely: at least `recurrence`
/// tail values reach `non_levy`. Anything else is Inconclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub levy: Rat,
    pub slack: Rat,
    pub min_horizon: u64,
    pub non_levy: Rat,
    pub recurrence: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::defect()
    }
}

impl Thresholds {
    /// For defect and displacement profiles.
    pub fn defect() -> Self {
        Thresholds { levy: rat(1, 100), slack: rat(1, 1), min_horizon: 10_000, non_levy: rat(1, 10), recurrence: 3 }
    }

    /// For exception densities of `π(n)/n`. A Lévy permutation with bounded
    /// displacement `c` still has about `c/ε` exceptions below `c/ε`, so the
    /// Lévy bar is looser here.
    pub fn ratio_stat() -> Self {
        Thresholds { levy: rat(1, 20), ..Thresholds::defect() }
    }

    pub fn classify(&self, horizon: &Nat, tail: &[Rat]) -> Classification {
        let hits = tail.iter().filter(|v| **v >= self.non_levy).count();
        if hits >= self.recurrence {
            return Classification::NonLevyLikely;
        }
        let bar = &self.levy * &self.slack;
        let max = tail.iter().max();
        if *horizon >= Nat::from(self.min_horizon) && max.is_none_or(|m| *m <= bar) {
            Classification::LevyLikely
        } else {
            Classification::Inconclusive
        }
    }
}

/// How the defect count is obtained. For a bijection both counts agree:
/// `|{k : k ≤ n < π(k)}| = |{k : π(k) ≤ n < k}|`, so the modes cross-check
/// the forward and inverse evaluators against each other.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DefectMode {
    /// `|{k : k ≤ n < π(k)}|`, scanning `π(k)` for k ≤ n.
    Upward,
    /// `|{k : π(k) ≤ n < k}|`, scanning `π⁻¹(m)` for m ≤ n.
    #[default]
    Downward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectProfile {
    pub sequence: IndexSequence,
    pub mode: DefectMode,
    pub points: Vec<Nat>,
    /// The raw count at each point.
    pub counts: Vec<Nat>,
    /// `count / n`, in `[0, 1]`.
    pub defects: Vec<Rat>,
    pub tail_window: usize,
    pub tail_max: Rat,
    pub classification: Classification,
}

/// Defect counts `c(n)` for every `0 ≤ n ≤ horizon` in one O(horizon) sweep.
///
/// With `s_k = max(k, σ(k))` for σ = π (upward) or π⁻¹ (downward),
/// `c(n) = n − |{k ≤ n : s_k ≤ n}|`.
pub fn defect_prefix_counts(
    pi: &PermutationRule,
    horizon: u64,
    mode: DefectMode,
    eval: &EvalConfig,
) -> Result<Vec<u64>> {
    let reach = par::try_fold_range(
        eval.execution,
        1..=horizon,
        Vec::new,
        |mut acc: Vec<u64>, k| {
            let n = Nat::from(k);
            let image = match mode {
                DefectMode::Upward => pi.apply(&n)?,
                DefectMode::Downward => pi.invert(&n)?,
            };
            acc.push(image.to_u64().map_or(u64::MAX, |x| x.max(k)));
            Ok::<_, Error>(acc)
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    let mut hist = vec![0u64; horizon as usize + 1];
    for s in reach {
        if s <= horizon {
            hist[s as usize] += 1;
        }
    }
    let mut settled = 0u64;
    Ok(hist
        .iter()
        .enumerate()
        .map(|(n, h)| {
            settled += h;
            n as u64 - settled
        })
        .collect())
}

fn points_within(seq: &IndexSequence, eval: &EvalConfig) -> Result<(Vec<Nat>, u64)> {
    let points = seq.points()?;
    let horizon = eval.check_horizon(points.last().expect("validated nonempty"))?;
    Ok((points, horizon))
}

/// The Lévy defect `|{k : k ≤ n < π(k)}| / n` at every point of `seq`.
pub fn levy_defect_profile(
    pi: &PermutationRule,
    seq: &IndexSequence,
    mode: DefectMode,
    thresholds: &Thresholds,
    opts: &SampleOptions,
) -> Result<DefectProfile> {
    let (points, horizon) = points_within(seq, &opts.eval)?;
    let all = defect_prefix_counts(pi, horizon, mode, &opts.eval)?;
    let counts: Vec<Nat> = points.iter().map(|n| Nat::from(all[n.to_usize().expect("within horizon")])).collect();
    let defects: Vec<Rat> = counts.iter().zip(&points).map(|(c, n)| ratio(c, n)).collect();
    let tail_window = opts.tail_len(points.len());
    let tail = &defects[defects.len() - tail_window..];
    let tail_max = tail.iter().max().cloned().unwrap_or_default();
    let classification = thresholds.classify(points.last().expect("nonempty"), tail);
    Ok(DefectProfile { sequence: seq.clone(), mode, points, counts, defects, tail_window, tail_max, classification })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementProfile {
    pub sequence: IndexSequence,
    pub points: Vec<Nat>,
    /// `A(n)`.
    pub set_counts: Vec<Nat>,
    /// `(πA)(n) = |{m ≤ n : π⁻¹(m) ∈ A}|`.
    pub image_counts: Vec<Nat>,
    /// `(A(n) − (πA)(n)) / n`, in `[−1, 1]`.
    pub values: Vec<Rat>,
    pub tail_window: usize,
    pub tail_max_abs: Rat,
    /// Evidence about this one set only; no finite family of sets decides
    /// membership in the Lévy group.
    pub classification: Classification,
}

/// Largest `max(m, π⁻¹(m))` over `m ≤ horizon`: how far a witness set must be
/// enumerable to count images up to the horizon.
pub fn preimage_reach(pi: &PermutationRule, horizon: u64, eval: &EvalConfig) -> Result<u64> {
    let reach = par::try_fold_range(
        eval.execution,
        1..=horizon,
        || 0u64,
        |best, m| {
            let p = pi.invert(&Nat::from(m))?;
            let p = p.to_u64().unwrap_or(u64::MAX);
            Ok::<_, Error>(best.max(p).max(m))
        },
        u64::max,
    )?;
    eval.check_horizon(&Nat::from(reach))
}

/// `(πA)(n)` for every `0 ≤ n ≤ horizon`, through inverse evaluation.
pub fn image_prefix_counts(pi: &PermutationRule, a: &SymbolicSet, horizon: u64, eval: &EvalConfig) -> Result<Vec<u64>> {
    let hits = par::try_fold_range(
        eval.execution,
        1..=horizon,
        Vec::new,
        |mut acc: Vec<bool>, m| {
            acc.push(a.contains(&pi.invert(&Nat::from(m))?)?);
            Ok::<_, Error>(acc)
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    )?;
    let mut out = Vec::with_capacity(hits.len() + 1);
    let mut c = 0u64;
    out.push(0);
    for h in hits {
        c += h as u64;
        out.push(c);
    }
    Ok(out)
}

/// `(A(n) − (πA)(n)) / n` at every point of `seq`.
pub fn displacement_profile(
    pi: &PermutationRule,
    a: &SymbolicSet,
    seq: &IndexSequence,
    thresholds: &Thresholds,
    opts: &SampleOptions,
) -> Result<DisplacementProfile> {
    let (points, horizon) = points_within(seq, &opts.eval)?;
    let images = image_prefix_counts(pi, a, horizon, &opts.eval)?;
    let mut set_counts = Vec::with_capacity(points.len());
    let mut image_counts = Vec::with_capacity(points.len());
    let mut values = Vec::with_capacity(points.len());
    for n in &points {
        let c = a.count_with(n, opts.eval.enumeration_budget)?;
        let im = Nat::from(images[n.to_usize().expect("within horizon")]);
        let diff = BigInt::from(c.clone()) - BigInt::from(im.clone());
        values.push(Rat::new(diff, BigInt::from(n.clone())));
        set_counts.push(c);
        image_counts.push(im);
    }
    let tail_window = opts.tail_len(points.len());
    let tail: Vec<Rat> = values[values.len() - tail_window..].iter().map(Rat::abs).collect();
    let tail_max_abs = tail.iter().max().cloned().unwrap_or_default();
    let classification = thresholds.classify(points.last().expect("nonempty"), &tail);
    Ok(DisplacementProfile {
        sequence: seq.clone(),
        points,
        set_counts,
        image_counts,
        values,
        tail_window,
        tail_max_abs,
        classification,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioStatReport {
    pub stat: StatReport,
    pub thresholds: Thresholds,
    pub classification: Classification,
}

/// Statistical convergence of `π(n)/n` to 1: exception densities of
/// `{n : |π(n)/n − 1| ≥ ε}` at each checkpoint and each ε.
pub fn ratio_stat_report(
    pi: &PermutationRule,
    eps_grid: &[Rat],
    checkpoints: &IndexSequence,
    thresholds: &Thresholds,
    opts: &SampleOptions,
) -> Result<RatioStatReport> {
    let x = |n: &Nat| Ok(ratio(&pi.apply(n)?, n));
    let slack = &thresholds.levy * &thresholds.slack;
    let stat = statistical_limit(&x, &rat(1, 1), eps_grid, checkpoints, &slack, opts)?;
    let horizon = stat.checkpoints.last_point()?;
    let tail_from = stat.rows[0].densities.len() - stat.tail_window;
    let verdicts: Vec<Classification> = stat
        .rows
        .iter()
        .map(|row| {
            let tail: Vec<Rat> = row.densities[tail_from..].iter().map(|(_, d)| d.clone()).collect();
            thresholds.classify(&horizon, &tail)
        })
        .collect();
    let classification = if verdicts.contains(&Classification::NonLevyLikely) {
        Classification::NonLevyLikely
    } else if verdicts.iter().all(|v| *v == Classification::LevyLikely) {
        Classification::LevyLikely
    } else {
        Classification::Inconclusive
    };
    Ok(RatioStatReport { stat, thresholds: thresholds.clone(), classification })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalSets {
    pub eps: Rat,
    pub horizon: u64,
    /// `{k ≤ horizon : π(k) − k > εk}`.
    pub above: SymbolicSet,
    /// `{k ≤ horizon : k − π(k) > εk}`.
    pub below: SymbolicSet,
    /// `(n, above(n)/n, below(n)/n, (above ∪ below)(n)/n)` at each checkpoint.
    pub profile: Vec<(Nat, Rat, Rat, Rat)>,
}

/// Materializes the points moved up or down by more than `ε·k`.
pub fn exceptional_sets(
    pi: &PermutationRule,
    eps: &Rat,
    checkpoints: &IndexSequence,
    eval: &EvalConfig,
) -> Result<ExceptionalSets> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let (points, horizon) = points_within(checkpoints, eval)?;
    // 1 = above, 2 = below, 0 = neither.
    let side = par::try_fold_range(
        eval.execution,
        1..=horizon,
        Vec::new,
        |mut acc: Vec<u8>, k| {
            let n = Nat::from(k);
            let d = BigInt::from(pi.apply(&n)?) - BigInt::from(k);
            let bound = eps * Rat::from_integer(BigInt::from(k));
            let d = Rat::from_integer(d);
            acc.push(if d > bound {
                1
            } else if -d > bound {
                2
            } else {
                0
            });
            Ok::<_, Error>(acc)
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    )?;
    let pick = |s: u8| side.iter().enumerate().filter(|(_, v)| **v == s).map(|(i, _)| i as u64 + 1).collect::<Vec<_>>();
    let above = SymbolicSet::finite(pick(1))?;
    let below = SymbolicSet::finite(pick(2))?;
    let mut profile = Vec::with_capacity(points.len());
    let (mut ca, mut cb, mut next) = (0u64, 0u64, 0usize);
    for (i, s) in side.iter().enumerate() {
        match s {
            1 => ca += 1,
            2 => cb += 1,
            _ => {}
        }
        let k = i as u64 + 1;
        while next < points.len() && points[next] == Nat::from(k) {
            let n = BigInt::from(k);
            let r = |c: u64| Rat::new(c.into(), n.clone());
            profile.push((points[next].clone(), r(ca), r(cb), r(ca + cb)));
            next += 1;
        }
    }
    Ok(ExceptionalSets { eps: eps.clone(), horizon, above, below, profile })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanDouwenReport {
    pub horizon: Nat,
    pub tail_start: Nat,
    /// `max |π(n)/n − 1|` over `tail_start ≤ n ≤ horizon`.
    pub sup: Rat,
    /// Smallest n attaining the maximum.
    pub argmax: Nat,
    pub tol: Rat,
    pub holds: bool,
}

/// Checks `π(n)/n → 1` over the window `[tail_start, horizon]`.
pub fn van_douwen_ratio_report(
    pi: &PermutationRule,
    horizon: &Nat,
    tail_start: &Nat,
    tol: &Rat,
    eval: &EvalConfig,
) -> Result<VanDouwenReport> {
    let hi = eval.check_horizon(horizon)?;
    let lo = tail_start
        .to_u64()
        .filter(|&t| t >= 1 && t <= hi)
        .ok_or_else(|| Error::InvalidArgument(format!("tail start {tail_start} must lie in [1, {horizon}]")))?;
    let one = rat(1, 1);
    let best = par::try_fold_range(
        eval.execution,
        lo..=hi,
        || None,
        |best: Option<(Rat, u64)>, k| {
            let n = Nat::from(k);
            let dev = (ratio(&pi.apply(&n)?, &n) - &one).abs();
            Ok::<_, Error>(match best {
                Some((b, at)) if b >= dev => Some((b, at)),
                _ => Some((dev, k)),
            })
        },
        |a, b| match (a, b) {
            (Some((x, i)), Some((y, j))) => Some(if x >= y { (x, i) } else { (y, j) }),
            (a, b) => a.or(b),
        },
    )?;
    let (sup, at) = best.expect("nonempty window");
    Ok(VanDouwenReport {
        horizon: horizon.clone(),
        tail_start: tail_start.clone(),
        holds: sup <= *tol,
        sup,
        argmax: Nat::from(at),
        tol: tol.clone(),
    })
}

/// `{k : π(k) > k}` as a predicate set enumerable up to `cap`.
///
/// Its displacement equals the Lévy defect exactly:
/// `A(n) − (πA)(n) = |{k : k ≤ n < π(k)}|`.
pub fn levy_witness_set(pi: &PermutationRule, cap: u64, eval: &EvalConfig) -> Result<SymbolicSet> {
    eval.check_horizon(&Nat::from(cap))?;
    let rule = pi.clone();
    let set = PredicateSet::new(
        format!("witness({pi},{cap})"),
        cap,
        std::sync::Arc::new(move |k: &Nat| Ok(rule.apply(k)? > *k)),
        eval.execution,
    )?;
    Ok(SymbolicSet::Predicate(set))
}
