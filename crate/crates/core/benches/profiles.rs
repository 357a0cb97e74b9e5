//! Parallel vs sequential execution on the hot sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use densitylab::asymptotics::{statistical_limit, IndexSequence, SampleOptions};
use densitylab::nset::SymbolicSet;
use densitylab::perm::{
    defect_prefix_counts, image_prefix_counts, pairing_permutation, ratio_stat_report, DefectMode, PermutationRule,
    Thresholds,
};
use densitylab::{rat, EvalConfig, Execution, Nat, Rat};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn eval(exec: Execution) -> EvalConfig {
    EvalConfig { execution: exec, ..EvalConfig::default() }
}

fn corpus() -> Vec<(&'static str, PermutationRule)> {
    let pair = pairing_permutation(&SymbolicSet::odds(), &SymbolicSet::evens()).unwrap();
    vec![
        ("pair", pair.clone()),
        ("qswap", PermutationRule::QuarterBlockSwap),
        ("qswap∘pair", PermutationRule::compose(PermutationRule::QuarterBlockSwap, pair)),
    ]
}

fn defect(c: &mut Criterion) {
    let mut g = c.benchmark_group("defect_prefix_counts");
    g.sample_size(10);
    for (name, pi) in corpus() {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &pi, |b, pi| {
                b.iter(|| defect_prefix_counts(pi, black_box(100_000), DefectMode::Downward, &eval(exec)).unwrap())
            });
        }
    }
    g.finish();
}

fn ratio_stat(c: &mut Criterion) {
    let mut g = c.benchmark_group("ratio_stat_report");
    g.sample_size(10);
    let cps = IndexSequence::explicit((1..=10u64).map(|i| i * 10_000)).unwrap();
    let eps = [rat(1, 10), rat(1, 100)];
    for (name, pi) in corpus() {
        for (mode, exec) in MODES {
            let opts = SampleOptions { eval: eval(exec), ..SampleOptions::default() };
            g.bench_with_input(BenchmarkId::new(mode, name), &pi, |b, pi| {
                b.iter(|| ratio_stat_report(pi, &eps, &cps, &Thresholds::ratio_stat(), &opts).unwrap())
            });
        }
    }
    g.finish();
}

fn image_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("image_prefix_counts");
    g.sample_size(10);
    let a = SymbolicSet::dexp_blocks().union(SymbolicSet::periodic(6, [1, 4]).unwrap());
    for (mode, exec) in MODES {
        g.bench_function(BenchmarkId::new(mode, "qswap"), |b| {
            b.iter(|| {
                image_prefix_counts(&PermutationRule::QuarterBlockSwap, &a, black_box(100_000), &eval(exec)).unwrap()
            })
        });
    }
    g.finish();
}

fn statistical(c: &mut Criterion) {
    let mut g = c.benchmark_group("statistical_limit");
    g.sample_size(10);
    let x = |n: &Nat| -> densitylab::Result<Rat> { Ok(Rat::new(1.into(), n.clone().into())) };
    let cps = IndexSequence::geometric(1000u64, 10, 3).unwrap();
    let eps = [rat(1, 10), rat(1, 1000)];
    for (mode, exec) in MODES {
        let opts = SampleOptions { eval: eval(exec), ..SampleOptions::default() };
        g.bench_function(mode, |b| {
            b.iter(|| statistical_limit(&x, &Rat::from_integer(0.into()), &eps, &cps, &rat(1, 20), &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, defect, ratio_stat, image_counts, statistical);
criterion_main!(benches);
