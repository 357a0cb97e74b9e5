use num_traits::{ToPrimitive, Zero};

use super::{abs_diff, IndexSequence, SampleOptions};
use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::par;
use crate::{rat, Nat, Rat};

/// A real sequence `x_n` given by an exact rational rule.
pub trait IndexRule: Sync {
    fn value(&self, n: &Nat) -> Result<Rat>;
}

impl<F> IndexRule for F
where
    F: Fn(&Nat) -> Result<Rat> + Sync,
{
    fn value(&self, n: &Nat) -> Result<Rat> {
        self(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatRow {
    pub eps: Rat,
    /// `(n, |A_ε ∩ [1, n]| / n)` at every checkpoint.
    pub densities: Vec<(Nat, Rat)>,
    pub tail_max: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatReport {
    pub limit: Rat,
    pub checkpoints: IndexSequence,
    pub rows: Vec<StatRow>,
    pub tail_window: usize,
    pub slack: Rat,
    /// Every row's tail stays within `slack`.
    pub convergent: bool,
}

/// Exception densities of `A_ε = {n : |x_n − L| ≥ ε}` at each checkpoint.
pub fn statistical_limit(
    x: &dyn IndexRule,
    limit: &Rat,
    eps_grid: &[Rat],
    checkpoints: &IndexSequence,
    slack: &Rat,
    opts: &SampleOptions,
) -> Result<StatReport> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| *e <= Rat::zero()) {
        return Err(Error::InvalidArgument("ε grid must be nonempty and positive".into()));
    }
    let points = checkpoints.points()?;
    let horizon = opts.eval.check_horizon(points.last().expect("validated nonempty"))?;

    // For each k, how many grid values ε satisfy ε ≤ |x_k − L|.
    let mut sorted: Vec<Rat> = eps_grid.to_vec();
    sorted.sort();
    let levels = exception_levels(x, limit, &sorted, horizon, opts)?;

    let mut counts = vec![vec![0u64; points.len()]; sorted.len()];
    let mut running = vec![0u64; sorted.len()];
    let mut next = 0usize;
    for k in 1..=horizon {
        let lv = levels[(k - 1) as usize] as usize;
        for r in running.iter_mut().take(lv) {
            *r += 1;
        }
        while next < points.len() && points[next] == Nat::from(k) {
            for (j, c) in counts.iter_mut().enumerate() {
                c[next] = running[j];
            }
            next += 1;
        }
    }

    let tail_window = opts.tail_len(points.len());
    let tail_from = points.len() - tail_window;
    let rows: Vec<StatRow> = eps_grid
        .iter()
        .map(|e| {
            let j = sorted.iter().position(|s| s == e).expect("grid value present");
            let densities: Vec<(Nat, Rat)> = points
                .iter()
                .zip(&counts[j])
                .map(|(n, &c)| (n.clone(), Rat::new(c.into(), n.clone().into())))
                .collect();
            let tail_max = densities[tail_from..].iter().map(|(_, d)| d.clone()).max().expect("nonempty tail");
            StatRow { eps: e.clone(), densities, tail_max }
        })
        .collect();
    let convergent = rows.iter().all(|r| &r.tail_max <= slack);
    Ok(StatReport {
        limit: limit.clone(),
        checkpoints: checkpoints.clone(),
        rows,
        tail_window,
        slack: slack.clone(),
        convergent,
    })
}

fn exception_levels(
    x: &dyn IndexRule,
    limit: &Rat,
    sorted_eps: &[Rat],
    horizon: u64,
    opts: &SampleOptions,
) -> Result<Vec<u16>> {
    par::try_fold_range(
        opts.eval.execution,
        1..=horizon,
        Vec::new,
        |mut acc: Vec<u16>, k| {
            let dev = abs_diff(&x.value(&Nat::from(k))?, limit);
            acc.push(sorted_eps.partition_point(|e| *e <= dev) as u16);
            Ok(acc)
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// Stage plan for extracting a density-one set along which `x_n → L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FridySchedule {
    /// Strictly decreasing tolerances, one per stage.
    pub eps: Vec<Rat>,
    /// End of the first stage.
    pub first_boundary: u64,
    /// Stage ends grow geometrically by this ratio; the last stage ends at the horizon.
    pub ratio: u64,
    /// Minimum acceptable witness ratio at the horizon.
    pub floor: Rat,
}

impl FridySchedule {
    pub fn new(eps: Vec<Rat>) -> Self {
        FridySchedule { eps, first_boundary: 10, ratio: 10, floor: rat(9, 10) }
    }

    /// Stage intervals `(lo, hi]` covering `(0, horizon]`.
    pub fn stages(&self, horizon: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.eps.len());
        let mut lo = 0u64;
        let mut hi = self.first_boundary;
        for j in 0..self.eps.len() {
            let end = if j + 1 == self.eps.len() { horizon } else { hi.min(horizon) };
            out.push((lo, end.max(lo)));
            lo = end.max(lo);
            hi = hi.saturating_mul(self.ratio);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FridyStage {
    pub lo: u64,
    pub hi: u64,
    pub eps: Rat,
    pub removed: u64,
    /// Largest `|x_n − L|` kept in this stage; always `< eps`.
    pub max_kept_deviation: Option<Rat>,
}

#[derive(Clone, Debug)]
pub struct FridyWitness {
    pub set: SymbolicSet,
    pub size: u64,
    pub horizon: u64,
    /// `|witness ∩ [1, horizon]| / horizon`.
    pub ratio: Rat,
    pub stages: Vec<FridyStage>,
}

/// Removes `A_{ε_j} ∩ (n_{j−1}, n_j]` stage by stage and returns what is left.
pub fn full_density_witness(
    x: &dyn IndexRule,
    limit: &Rat,
    horizon: u64,
    schedule: &FridySchedule,
    opts: &SampleOptions,
) -> Result<FridyWitness> {
    if horizon < 10 {
        return Err(Error::InvalidArgument("witness extraction needs horizon ≥ 10".into()));
    }
    if schedule.eps.is_empty()
        || schedule.eps.windows(2).any(|w| w[0] <= w[1])
        || schedule.eps.iter().any(|e| *e <= Rat::zero())
    {
        return Err(Error::InvalidArgument("ε schedule must be nonempty, positive and strictly decreasing".into()));
    }
    if schedule.first_boundary == 0 || schedule.ratio < 2 {
        return Err(Error::InvalidArgument("stage boundaries need first ≥ 1 and ratio ≥ 2".into()));
    }
    opts.eval.check_horizon(&Nat::from(horizon))?;

    let idx: Vec<u64> = (1..=horizon).collect();
    let devs = par::try_map(opts.eval.execution, &idx, |&k| Ok::<_, Error>(abs_diff(&x.value(&Nat::from(k))?, limit)))?;

    let mut kept: Vec<Nat> = Vec::new();
    let mut stages = Vec::new();
    for ((lo, hi), eps) in schedule.stages(horizon).into_iter().zip(&schedule.eps) {
        let mut removed = 0u64;
        let mut max_kept: Option<Rat> = None;
        for k in lo + 1..=hi {
            let d = &devs[(k - 1) as usize];
            if d >= eps {
                removed += 1;
            } else {
                kept.push(Nat::from(k));
                if max_kept.as_ref().is_none_or(|m| d > m) {
                    max_kept = Some(d.clone());
                }
            }
        }
        stages.push(FridyStage { lo, hi, eps: eps.clone(), removed, max_kept_deviation: max_kept });
    }
    let size = kept.len() as u64;
    let ratio = Rat::new(size.into(), horizon.into());
    if ratio < schedule.floor {
        return Err(Error::WitnessTooSparse {
            ratio: format!("{ratio} ≈ {:.6}", ratio.to_f64().unwrap_or(f64::NAN)),
            floor: schedule.floor.to_string(),
        });
    }
    Ok(FridyWitness { set: SymbolicSet::finite(kept)?, size, horizon, ratio, stages })
}
