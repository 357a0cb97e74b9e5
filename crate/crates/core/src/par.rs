//! Data-parallel helpers with a sequential fallback.
//!
//! Every hot loop in the crate goes through these functions. With the
//! `parallel` feature disabled, [`Execution::Parallel`] silently runs
//! sequentially, so results never depend on the feature set.

use std::ops::RangeInclusive;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel inner loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    #[cfg(feature = "parallel")]
    #[inline]
    fn parallel(self) -> bool {
        self == Execution::Parallel
    }
}

/// Ordered map over a slice.
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Ordered fallible map over a slice; the first error in index order wins.
pub fn try_map<T, U, E, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        let results: Vec<Result<U, E>> = items.par_iter().map(f).collect();
        return results.into_iter().collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

const CHUNK: u64 = 4096;

fn chunks(range: &RangeInclusive<u64>) -> Vec<RangeInclusive<u64>> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo > hi {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(((hi - lo) / CHUNK + 1) as usize);
    let mut start = lo;
    loop {
        let end = start.saturating_add(CHUNK - 1).min(hi);
        out.push(start..=end);
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

/// Fold over an integer range in fixed-size chunks, then combine the chunk
/// accumulators in ascending order. `fold` sees every index of its chunk in
/// increasing order, so any associative `reduce` yields identical results in
/// both execution modes.
pub fn try_fold_range<A, E, I, F, R>(
    exec: Execution,
    range: RangeInclusive<u64>,
    init: I,
    fold: F,
    reduce: R,
) -> Result<A, E>
where
    A: Send,
    E: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> Result<A, E> + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    let parts = chunks(&range);
    let run = |r: &RangeInclusive<u64>| -> Result<A, E> {
        let mut acc = init();
        for k in r.clone() {
            acc = fold(acc, k)?;
        }
        Ok(acc)
    };
    let partials = try_map(exec, &parts, run)?;
    Ok(partials.into_iter().fold(init(), &reduce))
}
