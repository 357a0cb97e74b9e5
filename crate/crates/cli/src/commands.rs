//! One function per subcommand; each returns the result body and its CSV rows.

use densitylab::asymptotics::{self, IndexSequence, LimitVerdict, SampleOptions};
use densitylab::measure::{
    counterexample_suite, equal_measure_test, evaluate_target, find_invariance_violation, MeasureReport, MeasureRule,
    MeasureVerdict, SuiteConfig, Target,
};
use densitylab::nset::SymbolicSet;
use densitylab::perm::{
    displacement_profile, levy_defect_profile, levy_witness_set, preimage_reach, ratio_stat_report, Classification,
    DefectMode, DefectProfile, PermutationRule, Thresholds,
};
use densitylab::syntax::{parse_expression, Expr, ExprKind};
use densitylab::{Error, Nat, Rat, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{nat, opt_rat, point, rat, CsvRow, Report};
use crate::Resolved;

fn parse_set(cfg: &Resolved, text: &str) -> Result<SymbolicSet> {
    match parse_expression(text, ExprKind::Set, &cfg.eval)? {
        Expr::Set(s) => Ok(s),
        _ => unreachable!("parser returns the requested kind"),
    }
}

fn parse_perm(cfg: &Resolved, text: &str) -> Result<PermutationRule> {
    match parse_expression(text, ExprKind::Perm, &cfg.eval)? {
        Expr::Perm(p) => Ok(p),
        _ => unreachable!("parser returns the requested kind"),
    }
}

fn parse_measure(cfg: &Resolved, text: &str) -> Result<MeasureRule> {
    match parse_expression(text, ExprKind::Measure, &cfg.eval)? {
        Expr::Measure(m) => Ok(m),
        _ => unreachable!("parser returns the requested kind"),
    }
}

/// 100 uniform points up to the horizon plus every `2^k` and `2^k − 1` below it.
pub fn levy_grid(horizon: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (1..=100u64).map(|i| i * horizon / 100).filter(|&n| n >= 1).collect();
    for k in 1..64 {
        let p = 1u64 << k;
        if p - 1 > horizon {
            break;
        }
        pts.push(p - 1);
        if p <= horizon {
            pts.push(p);
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Tail window covering the points at or beyond `tail`.
fn tail_opts(cfg: &Resolved, points: &[u64]) -> SampleOptions {
    let w = points.iter().filter(|&&n| n >= cfg.tail).count().max(1);
    SampleOptions { tail_window: Some(w), eval: cfg.eval }
}

fn default_opts(cfg: &Resolved) -> SampleOptions {
    SampleOptions { tail_window: None, eval: cfg.eval }
}

fn thresholds(t: &Thresholds) -> Value {
    json!({
        "levy": rat(&t.levy),
        "slack": rat(&t.slack),
        "min_horizon": t.min_horizon.to_string(),
        "non_levy": rat(&t.non_levy),
        "recurrence": t.recurrence,
    })
}

fn limit_verdict(v: &LimitVerdict) -> Value {
    match v {
        LimitVerdict::Converged { value, achieved_tol } => {
            json!({ "kind": "converged", "value": rat(value), "achieved_tol": rat(achieved_tol) })
        }
        LimitVerdict::Oscillating { tail_inf, tail_sup } => {
            json!({ "kind": "oscillating", "tail_inf": rat(tail_inf), "tail_sup": rat(tail_sup) })
        }
    }
}

fn measure_verdict(v: &MeasureVerdict) -> Value {
    match v {
        MeasureVerdict::Value { value, achieved_tol } => {
            json!({ "kind": "value", "value": rat(value), "achieved_tol": rat(achieved_tol) })
        }
        MeasureVerdict::Interval { lo, hi } => json!({ "kind": "interval", "lo": rat(lo), "hi": rat(hi) }),
    }
}

fn measure_report(r: &MeasureReport) -> Value {
    json!({
        "rule": r.rule.to_string(),
        "verdict": measure_verdict(&r.verdict),
        "partials": r.points.iter().zip(&r.partials).map(|(n, v)| point(n, v)).collect::<Vec<_>>(),
        "tail_window": r.tail_window,
        "limits": r.limits.iter().map(|l| json!({
            "sequence": l.sequence.to_string(),
            "values": l.points.iter().zip(&l.values).map(|(n, v)| point(n, v)).collect::<Vec<_>>(),
            "verdict": limit_verdict(&l.verdict),
        })).collect::<Vec<_>>(),
        "terms": r.terms.iter().map(|(w, t)| json!({ "weight": rat(w), "report": measure_report(t) })).collect::<Vec<_>>(),
    })
}

fn defect_json(p: &DefectProfile) -> Value {
    json!({
        "mode": match p.mode { DefectMode::Upward => "upward", DefectMode::Downward => "downward" },
        "classification": p.classification.as_str(),
        "tail_max": rat(&p.tail_max),
        "tail_window": p.tail_window,
        "table": p.points.iter().zip(&p.counts).zip(&p.defects)
            .map(|((n, c), d)| json!({ "n": nat(n), "count": nat(c), "defect": rat(d) }))
            .collect::<Vec<_>>(),
    })
}

fn defect_rows(p: &DefectProfile) -> Vec<CsvRow> {
    p.points.iter().zip(&p.defects).map(|(n, d)| CsvRow::plain(n, d)).collect()
}

pub fn density(cfg: &Resolved, text: &str) -> Result<Report> {
    let set = parse_set(cfg, text)?;
    let r = asymptotics::density(&set, &Nat::from(cfg.horizon), &Nat::from(cfg.tail), &cfg.tol, &cfg.eval)?;
    Ok(Report {
        result: json!({
            "set": set.to_string(),
            "lower": rat(&r.lower),
            "upper": rat(&r.upper),
            "exact": opt_rat(r.exact.as_ref()),
            "approx": opt_rat(r.approx.as_ref()),
            "samples": r.samples.iter().map(|(n, v)| point(n, v)).collect::<Vec<_>>(),
        }),
        csv_labels: vec![],
        csv_rows: r.samples.iter().map(|(n, v)| CsvRow::plain(n, v)).collect(),
    })
}

pub fn levy(cfg: &Resolved, text: &str, mode: DefectMode) -> Result<Report> {
    let pi = parse_perm(cfg, text)?;
    let grid = levy_grid(cfg.horizon);
    let th = Thresholds::defect();
    let p = levy_defect_profile(&pi, &IndexSequence::explicit(grid.clone())?, mode, &th, &tail_opts(cfg, &grid))?;
    let mut result = defect_json(&p);
    result["perm"] = json!(pi.to_string());
    result["thresholds"] = thresholds(&th);
    Ok(Report { result, csv_labels: vec![], csv_rows: defect_rows(&p) })
}

pub fn statlim(cfg: &Resolved, text: &str) -> Result<Report> {
    let pi = parse_perm(cfg, text)?;
    let mut cps: Vec<u64> = (1..=10u64).map(|i| i * cfg.horizon / 10).filter(|&n| n >= 1).collect();
    cps.dedup();
    let th = Thresholds::ratio_stat();
    let r = ratio_stat_report(&pi, &cfg.eps, &IndexSequence::explicit(cps.clone())?, &th, &tail_opts(cfg, &cps))?;
    let mut rows = Vec::new();
    for row in &r.stat.rows {
        for (n, d) in &row.densities {
            rows.push(CsvRow { labels: vec![row.eps.to_string()], n: n.clone(), value: d.clone() });
        }
    }
    Ok(Report {
        result: json!({
            "perm": pi.to_string(),
            "classification": r.classification.as_str(),
            "thresholds": thresholds(&th),
            "tail_window": r.stat.tail_window,
            "rows": r.stat.rows.iter().map(|row| json!({
                "eps": rat(&row.eps),
                "tail_max": rat(&row.tail_max),
                "densities": row.densities.iter().map(|(n, d)| point(n, d)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        csv_labels: vec!["eps"],
        csv_rows: rows,
    })
}

pub fn displacement(cfg: &Resolved, perm: &str, set: &str) -> Result<Report> {
    let pi = parse_perm(cfg, perm)?;
    let a = parse_set(cfg, set)?;
    let grid = levy_grid(cfg.horizon);
    let th = Thresholds::defect();
    let p = displacement_profile(&pi, &a, &IndexSequence::explicit(grid.clone())?, &th, &tail_opts(cfg, &grid))?;
    Ok(Report {
        result: json!({
            "perm": pi.to_string(),
            "set": a.to_string(),
            "classification": p.classification.as_str(),
            "tail_max_abs": rat(&p.tail_max_abs),
            "tail_window": p.tail_window,
            "thresholds": thresholds(&th),
            "table": p.points.iter().enumerate().map(|(i, n)| json!({
                "n": nat(n),
                "set_count": nat(&p.set_counts[i]),
                "image_count": nat(&p.image_counts[i]),
                "value": rat(&p.values[i]),
            })).collect::<Vec<_>>(),
        }),
        csv_labels: vec![],
        csv_rows: p.points.iter().zip(&p.values).map(|(n, v)| CsvRow::plain(n, v)).collect(),
    })
}

pub fn measure(cfg: &Resolved, rule: &str, set: &str, image: Option<&str>) -> Result<Report> {
    let mu = parse_measure(cfg, rule)?;
    let a = parse_set(cfg, set)?;
    let pi = image.map(|p| parse_perm(cfg, p)).transpose()?;
    let target = match &pi {
        Some(p) => Target::Image(p, &a),
        None => Target::Set(&a),
    };
    let r = evaluate_target(&mu, target, &cfg.tol, &default_opts(cfg))?;
    let mut rows: Vec<CsvRow> = r
        .points
        .iter()
        .zip(&r.partials)
        .map(|(n, v)| CsvRow { labels: vec!["rule".into()], n: n.clone(), value: v.clone() })
        .collect();
    for (i, (_, t)) in r.terms.iter().enumerate() {
        for (n, v) in t.points.iter().zip(&t.partials) {
            rows.push(CsvRow { labels: vec![format!("term{}", i + 1)], n: n.clone(), value: v.clone() });
        }
    }
    Ok(Report {
        result: json!({
            "set": a.to_string(),
            "image_under": pi.map(|p| p.to_string()),
            "report": measure_report(&r),
        }),
        csv_labels: vec!["series"],
        csv_rows: rows,
    })
}

/// Leading pairs `(a_i, φ(a_i))` shown in the pair report.
const SHOWN_PAIRS: u64 = 10;

pub fn pair(cfg: &Resolved, a: &str, b: &str) -> Result<Report> {
    let a = parse_set(cfg, a)?;
    let b = parse_set(cfg, b)?;
    let rule = densitylab::perm::pairing_permutation(&a, &b)?;
    let PermutationRule::InterlacedPairing(phi) = &rule else { unreachable!("pairing constructor") };
    let mut pairs = Vec::new();
    for i in 1..=SHOWN_PAIRS {
        match phi.left().select(&Nat::from(i)) {
            Ok(x) => pairs.push(json!([nat(&x), nat(&phi.apply(&x)?)])),
            Err(Error::IndexBeyondSet { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let grid = levy_grid(cfg.horizon);
    let th = Thresholds::defect();
    let p = levy_defect_profile(
        &rule,
        &IndexSequence::explicit(grid.clone())?,
        DefectMode::Downward,
        &th,
        &tail_opts(cfg, &grid),
    )?;
    let mut identity = true;
    for (n, c) in p.points.iter().zip(&p.counts) {
        let l = phi.left().count_with(n, cfg.eval.enumeration_budget)?;
        let r = phi.right().count_with(n, cfg.eval.enumeration_budget)?;
        identity &= *c == if l >= r { l - r } else { r - l };
    }
    let mut result = defect_json(&p);
    result["perm"] = json!(rule.to_string());
    result["left"] = json!(phi.left().to_string());
    result["right"] = json!(phi.right().to_string());
    result["leading_pairs"] = json!(pairs);
    result["defect_identity_holds"] = json!(identity);
    result["thresholds"] = thresholds(&th);
    Ok(Report { result, csv_labels: vec![], csv_rows: defect_rows(&p) })
}

pub fn witness(cfg: &Resolved, text: &str) -> Result<Report> {
    let pi = parse_perm(cfg, text)?;
    let grid = levy_grid(cfg.horizon);
    let seq = IndexSequence::explicit(grid.clone())?;
    let th = Thresholds::defect();
    let opts = tail_opts(cfg, &grid);
    let reach = preimage_reach(&pi, cfg.horizon, &cfg.eval)?;
    let w = levy_witness_set(&pi, reach, &cfg.eval)?;
    let defect = levy_defect_profile(&pi, &seq, DefectMode::Downward, &th, &opts)?;
    let disp = displacement_profile(&pi, &w, &seq, &th, &opts)?;
    let identity =
        disp.set_counts.iter().zip(&disp.image_counts).zip(&defect.counts).all(|((s, i), c)| s >= i && &(s - i) == c);
    let certificate = if defect.classification == Classification::NonLevyLikely {
        match find_invariance_violation(&pi, cfg.horizon, &th, &default_opts(cfg)) {
            Ok(c) => json!({
                "subsequence": c.subsequence.to_string(),
                "profile": c.subsequence.points()?.iter().zip(&c.profile).map(|(n, v)| point(n, v)).collect::<Vec<_>>(),
                "gap": rat(&c.gap),
                "horizon": c.horizon.to_string(),
                "verified": c.verify()?,
            }),
            Err(e @ Error::NoViolationFound { .. }) => json!({ "none": e.to_string() }),
            Err(e) => return Err(e),
        }
    } else {
        Value::Null
    };
    Ok(Report {
        result: json!({
            "perm": pi.to_string(),
            "witness": w.to_string(),
            "enumerated_to": reach.to_string(),
            "classification": defect.classification.as_str(),
            "identity_holds": identity,
            "table": disp.points.iter().enumerate().map(|(i, n)| json!({
                "n": nat(n),
                "witness_count": nat(&disp.set_counts[i]),
                "image_count": nat(&disp.image_counts[i]),
                "defect_count": nat(&defect.counts[i]),
                "displacement": rat(&disp.values[i]),
            })).collect::<Vec<_>>(),
            "certificate": certificate,
        }),
        csv_labels: vec![],
        csv_rows: disp.points.iter().zip(&disp.values).map(|(n, v)| CsvRow::plain(n, v)).collect(),
    })
}

fn seq_corpus(k: u32) -> Result<Vec<IndexSequence>> {
    let d = IndexSequence::dexp(k)?;
    Ok(vec![d.clone(), d.doubled(), IndexSequence::geometric(8u64, 16, k)?])
}

pub fn equal(cfg: &Resolved, a: &str, b: &str) -> Result<Report> {
    let a = parse_set(cfg, a)?;
    let b = parse_set(cfg, b)?;
    let r = equal_measure_test(
        &a,
        &b,
        &seq_corpus(cfg.dexp_terms)?,
        &Nat::from(cfg.horizon),
        &Nat::from(cfg.tail),
        &cfg.tol,
        &default_opts(cfg),
    )?;
    Ok(Report {
        result: json!({
            "a": a.to_string(),
            "b": b.to_string(),
            "verdict": r.verdict.as_str(),
            "grid_sup": rat(&r.grid_sup),
            "grid_argmax": nat(&r.grid_argmax),
            "per_sequence": r.per_sequence.iter()
                .map(|(s, v)| json!({ "sequence": s.to_string(), "tail_sup": rat(v) }))
                .collect::<Vec<_>>(),
            "grid": r.grid.iter().map(|(n, v)| point(n, v)).collect::<Vec<_>>(),
        }),
        csv_labels: vec![],
        csv_rows: r.grid.iter().map(|(n, v)| CsvRow::plain(n, v)).collect(),
    })
}

/// Random closed-form sets for the seeded sandwich check.
fn random_set(rng: &mut ChaCha8Rng, depth: u32) -> Result<SymbolicSet> {
    if depth == 0 || rng.gen_bool(0.3) {
        return Ok(match rng.gen_range(0..4) {
            0 => {
                let m = rng.gen_range(1..=24u64);
                SymbolicSet::periodic(m, (0..m).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())?
            }
            1 => SymbolicSet::finite(
                (0..rng.gen_range(0..8)).map(|_| rng.gen_range(1..1_000_000u64)).collect::<Vec<_>>(),
            )?,
            2 => SymbolicSet::dexp_blocks(),
            _ => {
                let mut ends: Vec<u64> = (0..6).map(|_| rng.gen_range(1..1u64 << 50)).collect();
                ends.sort_unstable();
                ends.dedup();
                SymbolicSet::blocks(ends.chunks_exact(2).map(|c| (c[0], c[1])).collect::<Vec<_>>())?
            }
        });
    }
    Ok(match rng.gen_range(0..5) {
        0 => random_set(rng, depth - 1)?.union(random_set(rng, depth - 1)?),
        1 => random_set(rng, depth - 1)?.intersect(random_set(rng, depth - 1)?),
        2 => random_set(rng, depth - 1)?.diff(random_set(rng, depth - 1)?),
        3 => random_set(rng, depth - 1)?.complement(),
        _ => random_set(rng, depth - 1)?.scale(rng.gen_range(1..=5))?,
    })
}

/// Number of generated sets in the seeded sandwich check.
const RANDOM_SETS: usize = 20;

fn random_sandwich(seed: u64) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<SymbolicSet> = (0..RANDOM_SETS).map(|_| random_set(&mut rng, 3)).collect::<Result<_>>()?;
    let mut points: Vec<u64> = (1..62).flat_map(|k| [(1u64 << k) - 1, 1u64 << k]).collect();
    points.extend((0..50).map(|_| rng.gen_range(1..1u64 << 61)));
    let mut checked = 0usize;
    let mut violation = Value::Null;
    for s in &sets {
        for &n in &points {
            let n = Nat::from(n);
            let c = s.count(&n)?;
            let c2 = s.count(&(&n << 1u32))?;
            checked += 1;
            if !(c <= c2 && c2 <= &c + &n) && violation.is_null() {
                violation = json!({ "set": s.to_string(), "n": nat(&n) });
            }
        }
    }
    Ok(json!({
        "seed": seed.to_string(),
        "sets": sets.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "points_checked": checked,
        "holds": violation.is_null(),
        "first_violation": violation,
    }))
}

fn partial_rows<'a>(item: &'a str, rows: &'a [(u32, Nat, Rat)]) -> impl Iterator<Item = CsvRow> + 'a {
    rows.iter().map(move |(i, n, v)| CsvRow {
        labels: vec![item.into(), i.to_string()],
        n: n.clone(),
        value: v.clone(),
    })
}

fn partials_json(rows: &[(u32, Nat, Rat)]) -> Value {
    rows.iter().map(|(i, n, v)| json!({ "i": i, "n": nat(n), "value": rat(v) })).collect()
}

pub fn suite(cfg: &Resolved) -> Result<Report> {
    let config =
        SuiteConfig { tol: cfg.tol.clone(), pointwise_limit: cfg.horizon, ..SuiteConfig::new(cfg.dexp_terms)? };
    cfg.eval.check_horizon(&Nat::from(config.pointwise_limit))?;
    let s = counterexample_suite(&config, &default_opts(cfg))?;
    let (m1, m2, m3) = (&s.measure_above_upper_density, &s.scaling_failure, &s.monotonicity_failure);
    let block_ends: Vec<(u32, Nat, Rat)> =
        m3.block_ends.iter().enumerate().map(|(i, (n, v))| (i as u32 + 1, n.clone(), v.clone())).collect();
    let mut rows: Vec<CsvRow> = partial_rows("measure_partials", &m1.partials).collect();
    rows.extend(partial_rows("upper_density", &m1.upper_density));
    rows.extend(partial_rows("scaled_partials", &m2.partials));
    rows.extend(partial_rows("block_end_ratio", &block_ends));
    Ok(Report {
        result: json!({
            "sequences": config.seq_corpus.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "measure_above_upper_density": {
                "partials": partials_json(&m1.partials),
                "report": measure_report(&m1.report),
                "upper_density": partials_json(&m1.upper_density),
                "holds": m1.measure_exceeds_upper_density,
            },
            "scaling_failure": {
                "partials": partials_json(&m2.partials),
                "report": measure_report(&m2.report),
                "expected": rat(&m2.expected),
                "grid_points": m2.grid.len(),
                "ratio_identity_holds": m2.ratio_identity_holds,
                "holds": m2.scaling_fails,
            },
            "monotonicity_failure": {
                "dominating": m3.dominating.to_string(),
                "checked_up_to": m3.checked_up_to.to_string(),
                "pointwise_holds": m3.pointwise_holds,
                "first_violation": m3.first_violation.map(|n| n.to_string()),
                "block_ends": partials_json(&block_ends),
                "tail_bound_holds": m3.tail_bound_holds,
                "density": rat(&m3.density),
                "report": measure_report(&m3.report),
                "measure_of_a": rat(&m3.measure_of_a),
                "holds": m3.monotonicity_fails,
            },
            "sandwich": {
                "points": s.sandwich.points,
                "holds": s.sandwich.holds,
                "partials_in_unit": s.sandwich.partials_in_unit,
                "random": random_sandwich(cfg.seed)?,
            },
            "mixtures": s.mixtures.iter().map(|m| json!({
                "rule": m.rule.to_string(),
                "monotone": m.monotone,
                "scaling_gap": rat(&m.scaling_gap),
                "scaling_holds": m.scaling_holds,
            })).collect::<Vec<_>>(),
        }),
        csv_labels: vec!["item", "i"],
        csv_rows: rows,
    })
}
