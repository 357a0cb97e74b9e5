//! Symbolic subsets of ℕ = {1, 2, 3, …} with exact counting.
//!
//! Counting `A(n) = |A ∩ [1, n]|` is closed form for every node except
//! [`SymbolicSet::Predicate`]: leaves have direct formulas and algebra nodes
//! go through a piecewise-periodic decomposition of `[1, n]` (see
//! `pattern`). Trees containing a predicate fall back to bounded enumeration.

pub(crate) mod pattern;
mod predicate;

use std::num::NonZeroU64;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{Nat, Rat};
use pattern::{Pattern, Pieces, SetOp};

pub use predicate::{MembershipRule, PredicateSet};

/// Default limit on elements enumerated (or pieces materialized) by a single
/// counting query that has no closed form.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// Declared size of a set (or of its complement).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Finite,
    Infinite,
    Unknown,
}

/// Sorted, distinct, positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteList(Vec<Nat>);

impl FiniteList {
    pub fn elements(&self) -> &[Nat] {
        &self.0
    }
}

/// `{n ≥ 1 : n mod modulus ∈ residues}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Periodic {
    modulus: u64,
    residues: Vec<u64>,
}

impl Periodic {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    fn pattern(&self) -> Pattern {
        Pattern::new(self.modulus, self.residues.clone())
    }
}

/// Sorted, disjoint, nonempty half-open intervals `[l, r)` with `l ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExplicitBlocks(Vec<(Nat, Nat)>);

impl ExplicitBlocks {
    pub fn intervals(&self) -> &[(Nat, Nat)] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockSource {
    Explicit(ExplicitBlocks),
    /// Interval `i ≥ 1` is `[2^(2^i), 2·2^(2^i))`: 4..8, 16..32, 256..512, …
    DoubleExponential,
}

/// Interval `i` of the double-exponential block set.
pub fn dexp_interval(i: u32) -> (Nat, Nat) {
    assert!(i >= 1, "double-exponential blocks are indexed from 1");
    let l = Nat::one() << (1u64 << i);
    let r = &l << 1u32;
    (l, r)
}

/// Double-exponential intervals `[l, r)` with `l ≤ n`.
fn dexp_intervals_upto(n: &Nat) -> Vec<(Nat, Nat)> {
    let mut out = Vec::new();
    let mut i = 1u32;
    loop {
        // 2^(2^i) ≤ n needs 2^i < bits(n).
        if (1u64 << i) >= n.bits() {
            break;
        }
        out.push(dexp_interval(i));
        i += 1;
    }
    out
}

/// A finite description of a subset of ℕ.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolicSet {
    Empty,
    Full,
    FiniteList(FiniteList),
    Periodic(Periodic),
    Blocks(BlockSource),
    /// `{t·a : a ∈ inner}`.
    Scaled(NonZeroU64, Arc<SymbolicSet>),
    Predicate(PredicateSet),
    Union(Arc<SymbolicSet>, Arc<SymbolicSet>),
    Intersect(Arc<SymbolicSet>, Arc<SymbolicSet>),
    Diff(Arc<SymbolicSet>, Arc<SymbolicSet>),
    Complement(Arc<SymbolicSet>),
}

impl PartialEq for PredicateSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl SymbolicSet {
    /// Finite set; input order is irrelevant, duplicates are merged.
    pub fn finite<I, T>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Nat>,
    {
        let mut v: Vec<Nat> = elements.into_iter().map(Into::into).collect();
        if v.iter().any(Zero::is_zero) {
            return Err(Error::InvalidSet("finite sets hold positive integers only".into()));
        }
        v.sort();
        v.dedup();
        Ok(SymbolicSet::FiniteList(FiniteList(v)))
    }

    pub fn periodic(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidSet("periodic modulus must be at least 1".into()));
        }
        let mut r: Vec<u64> = residues.into_iter().collect();
        r.sort_unstable();
        if r.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet("periodic residues must be distinct".into()));
        }
        if let Some(&bad) = r.iter().find(|&&x| x >= modulus) {
            return Err(Error::InvalidSet(format!("residue {bad} is not below modulus {modulus}")));
        }
        Ok(SymbolicSet::Periodic(Periodic { modulus, residues: r }))
    }

    /// Union of half-open intervals `[l, r)`, given sorted and disjoint.
    pub fn blocks<I, T>(intervals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, T)>,
        T: Into<Nat>,
    {
        let v: Vec<(Nat, Nat)> = intervals.into_iter().map(|(l, r)| (l.into(), r.into())).collect();
        for (l, r) in &v {
            if l.is_zero() {
                return Err(Error::InvalidSet("block intervals start at 1 or later".into()));
            }
            if l >= r {
                return Err(Error::InvalidSet(format!("empty block [{l}, {r})")));
            }
        }
        if v.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::InvalidSet("block intervals must be sorted and disjoint".into()));
        }
        Ok(SymbolicSet::Blocks(BlockSource::Explicit(ExplicitBlocks(v))))
    }

    /// `⋃_{i≥1} [2^(2^i), 2·2^(2^i))`.
    pub fn dexp_blocks() -> Self {
        SymbolicSet::Blocks(BlockSource::DoubleExponential)
    }

    pub fn odds() -> Self {
        SymbolicSet::Periodic(Periodic { modulus: 2, residues: vec![1] })
    }

    pub fn evens() -> Self {
        SymbolicSet::Periodic(Periodic { modulus: 2, residues: vec![0] })
    }

    /// `{t·a : a ∈ self}`; `t = 1` returns `self` unchanged.
    pub fn scale(&self, t: u64) -> Result<Self> {
        match NonZeroU64::new(t) {
            None => Err(Error::InvalidSet("scale factor must be at least 1".into())),
            Some(f) if f.get() == 1 => Ok(self.clone()),
            Some(f) => Ok(SymbolicSet::Scaled(f, Arc::new(self.clone()))),
        }
    }

    pub fn union(self, other: SymbolicSet) -> Self {
        SymbolicSet::Union(Arc::new(self), Arc::new(other))
    }

    pub fn intersect(self, other: SymbolicSet) -> Self {
        SymbolicSet::Intersect(Arc::new(self), Arc::new(other))
    }

    pub fn diff(self, other: SymbolicSet) -> Self {
        SymbolicSet::Diff(Arc::new(self), Arc::new(other))
    }

    pub fn complement(self) -> Self {
        SymbolicSet::Complement(Arc::new(self))
    }

    pub fn contains(&self, n: &Nat) -> Result<bool> {
        if n.is_zero() {
            return Ok(false);
        }
        self.contains_pos(n)
    }

    fn contains_pos(&self, n: &Nat) -> Result<bool> {
        Ok(match self {
            SymbolicSet::Empty => false,
            SymbolicSet::Full => true,
            SymbolicSet::FiniteList(l) => l.0.binary_search(n).is_ok(),
            SymbolicSet::Periodic(p) => {
                let r = (n % p.modulus).to_u64().expect("residue fits u64");
                p.residues.binary_search(&r).is_ok()
            }
            SymbolicSet::Blocks(BlockSource::Explicit(b)) => {
                let i = b.0.partition_point(|(l, _)| l <= n);
                i > 0 && *n < b.0[i - 1].1
            }
            SymbolicSet::Blocks(BlockSource::DoubleExponential) => {
                let e = n.bits() - 1;
                e >= 2 && e.is_power_of_two()
            }
            SymbolicSet::Scaled(t, inner) => {
                let t = t.get();
                (n % t).is_zero() && inner.contains_pos(&(n / t))?
            }
            SymbolicSet::Predicate(p) => p.contains(n)?,
            SymbolicSet::Union(a, b) => a.contains_pos(n)? || b.contains_pos(n)?,
            SymbolicSet::Intersect(a, b) => a.contains_pos(n)? && b.contains_pos(n)?,
            SymbolicSet::Diff(a, b) => a.contains_pos(n)? && !b.contains_pos(n)?,
            SymbolicSet::Complement(a) => !a.contains_pos(n)?,
        })
    }

    /// `|S ∩ [1, n]|` with the default enumeration budget.
    pub fn count(&self, n: &Nat) -> Result<Nat> {
        self.count_with(n, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn count_with(&self, n: &Nat, budget: u64) -> Result<Nat> {
        Ok(match self {
            SymbolicSet::Empty => Nat::zero(),
            SymbolicSet::Full => n.clone(),
            SymbolicSet::FiniteList(l) => Nat::from(l.0.partition_point(|x| x <= n)),
            SymbolicSet::Periodic(p) => {
                let pat = p.pattern();
                // The pattern counts from 0; ℕ starts at 1.
                let zero = pat.contains(&Nat::zero()) as u32;
                pat.count_below(&(n + 1u32)) - zero
            }
            SymbolicSet::Blocks(BlockSource::Explicit(b)) => block_count(b.0.iter().map(|(l, r)| (l, r)), n),
            SymbolicSet::Blocks(BlockSource::DoubleExponential) => {
                let iv = dexp_intervals_upto(n);
                block_count(iv.iter().map(|(l, r)| (l, r)), n)
            }
            SymbolicSet::Scaled(t, inner) => inner.count_with(&(n / t.get()), budget)?,
            SymbolicSet::Predicate(p) => p.count(n)?,
            SymbolicSet::Complement(inner) => n - inner.count_with(n, budget)?,
            SymbolicSet::Union(..) | SymbolicSet::Intersect(..) | SymbolicSet::Diff(..) => {
                match self.pieces(n, budget)? {
                    Some(p) => p.count(),
                    None => self.count_by_scan(n, budget)?,
                }
            }
        })
    }

    fn count_by_scan(&self, n: &Nat, budget: u64) -> Result<Nat> {
        let limit = match n.to_u64() {
            Some(k) if k <= budget => k,
            _ => return Err(Error::EnumerationBudgetExceeded { horizon: n.clone(), budget }),
        };
        let mut c = 0u64;
        for k in 1..=limit {
            if self.contains_pos(&Nat::from(k))? {
                c += 1;
            }
        }
        Ok(Nat::from(c))
    }

    /// Piecewise-periodic decomposition of `[1, n]`; `None` when a predicate
    /// node is involved.
    pub(crate) fn pieces(&self, n: &Nat, budget: u64) -> Result<Option<Pieces>> {
        let end = n + 1u32;
        Ok(Some(match self {
            SymbolicSet::Empty => Pieces::uniform(Pattern::empty(), end),
            SymbolicSet::Full => Pieces::uniform(Pattern::full(), end),
            SymbolicSet::Periodic(p) => Pieces::uniform(p.pattern(), end),
            SymbolicSet::FiniteList(l) => {
                let upto = l.0.partition_point(|x| x <= n);
                if upto as u64 > budget {
                    return Err(Error::EnumerationBudgetExceeded { horizon: n.clone(), budget });
                }
                let iv: Vec<(Nat, Nat)> = l.0[..upto].iter().map(|x| (x.clone(), x + 1u32)).collect();
                Pieces::from_intervals(iv.iter().map(|(a, b)| (a, b)), end)
            }
            SymbolicSet::Blocks(BlockSource::Explicit(b)) => {
                Pieces::from_intervals(b.0.iter().map(|(l, r)| (l, r)), end)
            }
            SymbolicSet::Blocks(BlockSource::DoubleExponential) => {
                let iv = dexp_intervals_upto(n);
                Pieces::from_intervals(iv.iter().map(|(l, r)| (l, r)), end)
            }
            SymbolicSet::Scaled(t, inner) => {
                let t = t.get();
                match inner.pieces(&(n / t), budget)? {
                    Some(p) => p.scale(t, end)?,
                    None => return Ok(None),
                }
            }
            SymbolicSet::Predicate(_) => return Ok(None),
            SymbolicSet::Complement(inner) => match inner.pieces(n, budget)? {
                Some(p) => p.map(Pattern::complement),
                None => return Ok(None),
            },
            SymbolicSet::Union(a, b) => return merge(a, b, n, SetOp::Union, budget),
            SymbolicSet::Intersect(a, b) => return merge(a, b, n, SetOp::Intersect, budget),
            SymbolicSet::Diff(a, b) => return merge(a, b, n, SetOp::Diff, budget),
        }))
    }

    /// Elements `≤ n` in increasing order, at most `limit` of them.
    pub fn enumerate(&self, n: &Nat, limit: usize, budget: u64) -> Result<Vec<Nat>> {
        if let Some(p) = self.pieces(n, budget)? {
            return Ok(p.elements(limit));
        }
        let top = match n.to_u64() {
            Some(k) if k <= budget => k,
            _ => return Err(Error::EnumerationBudgetExceeded { horizon: n.clone(), budget }),
        };
        let mut out = Vec::new();
        for k in 1..=top {
            if out.len() >= limit {
                break;
            }
            let k = Nat::from(k);
            if self.contains_pos(&k)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// Structural breakpoints inside `[lo, hi]`: the first and last index of
    /// every piece of the decomposition. `None` for predicate trees.
    pub fn breakpoints(&self, lo: &Nat, hi: &Nat, budget: u64) -> Result<Option<Vec<Nat>>> {
        let Some(p) = self.pieces(hi, budget)? else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for (s, e, _) in p.iter() {
            let last = e - 1u32;
            if &last < lo {
                continue;
            }
            if s >= lo {
                out.push(s.clone());
            }
            out.push(last);
        }
        Ok(Some(out))
    }

    /// The `k`-th smallest element (1-based).
    pub fn select(&self, k: &Nat) -> Result<Nat> {
        self.select_with(k, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn select_with(&self, k: &Nat, budget: u64) -> Result<Nat> {
        if k.is_zero() {
            return Err(Error::InvalidArgument("select index starts at 1".into()));
        }
        let shape = self.shape();
        let ceiling: Option<Nat> = match (shape.card, &shape.bound) {
            (Cardinality::Finite, Some(b)) => {
                let size = self.count_with(b, budget)?;
                if &size < k {
                    return Err(Error::IndexBeyondSet { k: k.clone(), size });
                }
                Some(b.clone())
            }
            (Cardinality::Infinite, _) => self.predicate_cap().map(Nat::from),
            _ => Some(match self.predicate_cap() {
                Some(c) => Nat::from(c.min(budget)),
                None => Nat::from(budget),
            }),
        };
        // Exponential search for an upper end, then bisection on count.
        let mut hi = k.clone();
        loop {
            if let Some(c) = &ceiling {
                if &hi >= c {
                    hi = c.clone();
                    if &self.count_with(&hi, budget)? < k {
                        return Err(self.search_exhausted(c, k, budget));
                    }
                    break;
                }
            }
            if &self.count_with(&hi, budget)? >= k {
                break;
            }
            hi <<= 1u32;
        }
        let mut lo = Nat::zero(); // count(lo) < k ≤ count(hi)
        while &hi - &lo > Nat::one() {
            let mid: Nat = (&lo + &hi) >> 1u32;
            if &self.count_with(&mid, budget)? >= k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    fn search_exhausted(&self, ceiling: &Nat, k: &Nat, budget: u64) -> Error {
        if let Some(cap) = self.predicate_cap() {
            if ceiling == &Nat::from(cap) {
                return Error::PredicateCapExceeded {
                    label: self.predicate_label().unwrap_or_default(),
                    n: ceiling + 1u32,
                    cap,
                };
            }
        }
        match self.cardinality() {
            Cardinality::Finite => {
                Error::IndexBeyondSet { k: k.clone(), size: self.count_with(ceiling, budget).unwrap_or_default() }
            }
            _ => Error::EnumerationBudgetExceeded { horizon: ceiling.clone(), budget },
        }
    }

    /// Smallest enumeration cap among predicate nodes, if any.
    pub fn predicate_cap(&self) -> Option<u64> {
        match self {
            SymbolicSet::Predicate(p) => Some(p.cap()),
            SymbolicSet::Scaled(_, a) | SymbolicSet::Complement(a) => a.predicate_cap(),
            SymbolicSet::Union(a, b) | SymbolicSet::Intersect(a, b) | SymbolicSet::Diff(a, b) => {
                match (a.predicate_cap(), b.predicate_cap()) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                }
            }
            _ => None,
        }
    }

    fn predicate_label(&self) -> Option<String> {
        match self {
            SymbolicSet::Predicate(p) => Some(p.label().to_string()),
            SymbolicSet::Scaled(_, a) | SymbolicSet::Complement(a) => a.predicate_label(),
            SymbolicSet::Union(a, b) | SymbolicSet::Intersect(a, b) | SymbolicSet::Diff(a, b) => {
                a.predicate_label().or_else(|| b.predicate_label())
            }
            _ => None,
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        self.shape().card
    }

    /// Declared size of `ℕ ∖ S`.
    pub fn complement_cardinality(&self) -> Cardinality {
        self.shape().co_card
    }

    /// Exact asymptotic density when the set is eventually periodic.
    pub fn density_closed_form(&self) -> Option<Rat> {
        self.shape().eventual.map(|(_, p)| p.density())
    }

    pub(crate) fn shape(&self) -> Shape {
        match self {
            SymbolicSet::Empty => Shape::eventual(Nat::one(), Pattern::empty()),
            SymbolicSet::Full => Shape::eventual(Nat::one(), Pattern::full()),
            SymbolicSet::FiniteList(l) => {
                let thr = l.0.last().map(|x| x + 1u32).unwrap_or_else(Nat::one);
                Shape::eventual(thr, Pattern::empty())
            }
            SymbolicSet::Periodic(p) => Shape::eventual(Nat::one(), p.pattern()),
            SymbolicSet::Blocks(BlockSource::Explicit(b)) => {
                let thr = b.0.last().map(|(_, r)| r.clone()).unwrap_or_else(Nat::one);
                Shape::eventual(thr, Pattern::empty())
            }
            SymbolicSet::Blocks(BlockSource::DoubleExponential) => Shape {
                eventual: None,
                card: Cardinality::Infinite,
                co_card: Cardinality::Infinite,
                long_runs: true,
                co_long_runs: true,
                bound: None,
            },
            SymbolicSet::Scaled(t, inner) => {
                let t = t.get();
                let s = inner.shape();
                if let Some((thr, p)) = &s.eventual {
                    if let Some(sp) = p.scale(t) {
                        return Shape::eventual(thr * t, sp);
                    }
                }
                Shape {
                    eventual: None,
                    card: s.card,
                    co_card: if t >= 2 { Cardinality::Infinite } else { s.co_card },
                    long_runs: t == 1 && s.long_runs,
                    co_long_runs: s.co_long_runs,
                    bound: s.bound.map(|b| b * t),
                }
            }
            SymbolicSet::Predicate(_) => Shape {
                eventual: None,
                card: Cardinality::Unknown,
                co_card: Cardinality::Unknown,
                long_runs: false,
                co_long_runs: false,
                bound: None,
            },
            SymbolicSet::Complement(a) => a.shape().complement(),
            SymbolicSet::Intersect(a, b) => Shape::intersect(&a.shape(), &b.shape()),
            SymbolicSet::Diff(a, b) if a == b => Shape::eventual(Nat::one(), Pattern::empty()),
            SymbolicSet::Diff(a, b) => Shape::intersect(&a.shape(), &b.shape().complement()),
            SymbolicSet::Union(a, b) => Shape::intersect(&a.shape().complement(), &b.shape().complement()).complement(),
        }
    }
}

fn merge(a: &SymbolicSet, b: &SymbolicSet, n: &Nat, op: SetOp, budget: u64) -> Result<Option<Pieces>> {
    let (Some(pa), Some(pb)) = (a.pieces(n, budget)?, b.pieces(n, budget)?) else {
        return Ok(None);
    };
    pa.merge(&pb, op, budget).map(Some)
}

fn block_count<'a>(intervals: impl Iterator<Item = (&'a Nat, &'a Nat)>, n: &Nat) -> Nat {
    let stop = n + 1u32;
    let mut total = Nat::zero();
    for (l, r) in intervals {
        if l > n {
            break;
        }
        total += r.min(&stop) - l;
    }
    total
}

/// Conservative structural facts about a set, derived bottom-up.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    /// `(threshold, pattern)`: membership of every `n ≥ threshold` follows the pattern.
    pub eventual: Option<(Nat, Pattern)>,
    pub card: Cardinality,
    pub co_card: Cardinality,
    /// Contains intervals of every length.
    pub long_runs: bool,
    /// The complement contains intervals of every length.
    pub co_long_runs: bool,
    /// Upper bound on the elements, known for some finite sets.
    pub bound: Option<Nat>,
}

impl Shape {
    fn eventual(threshold: Nat, p: Pattern) -> Shape {
        let bound = p.is_empty().then(|| if threshold.is_zero() { Nat::zero() } else { &threshold - 1u32 });
        Shape {
            card: if p.is_empty() { Cardinality::Finite } else { Cardinality::Infinite },
            co_card: if p.is_full() { Cardinality::Finite } else { Cardinality::Infinite },
            long_runs: p.is_full(),
            co_long_runs: p.is_empty(),
            bound,
            eventual: Some((threshold, p)),
        }
    }

    fn complement(&self) -> Shape {
        if let Some((t, p)) = &self.eventual {
            return Shape::eventual(t.clone(), p.complement());
        }
        Shape {
            eventual: None,
            card: self.co_card,
            co_card: self.card,
            long_runs: self.co_long_runs,
            co_long_runs: self.long_runs,
            bound: None,
        }
    }

    fn eventually_nonempty(&self) -> bool {
        matches!(&self.eventual, Some((_, p)) if !p.is_empty())
    }

    fn eventually_full(&self) -> bool {
        matches!(&self.eventual, Some((_, p)) if p.is_full())
    }

    fn intersect(a: &Shape, b: &Shape) -> Shape {
        let bound = match (&a.bound, &b.bound) {
            (Some(x), Some(y)) => Some(x.min(y).clone()),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        if let (Some((ta, pa)), Some((tb, pb))) = (&a.eventual, &b.eventual) {
            if let Ok(p) = pa.combine(pb, SetOp::Intersect) {
                let mut s = Shape::eventual(ta.max(tb).clone(), p);
                if let (Some(x), Some(y)) = (&s.bound, &bound) {
                    s.bound = Some(x.min(y).clone());
                }
                return s;
            }
        }
        use Cardinality::*;
        let card = if a.card == Finite || b.card == Finite {
            Finite
        } else if (a.long_runs && b.eventually_nonempty())
            || (b.long_runs && a.eventually_nonempty())
            || (a.eventually_full() && b.card == Infinite)
            || (b.eventually_full() && a.card == Infinite)
        {
            Infinite
        } else {
            Unknown
        };
        let co_card = if a.co_card == Infinite || b.co_card == Infinite {
            Infinite
        } else if a.co_card == Finite && b.co_card == Finite {
            Finite
        } else {
            Unknown
        };
        Shape {
            eventual: None,
            card,
            co_card,
            long_runs: (a.long_runs && b.eventually_full()) || (b.long_runs && a.eventually_full()),
            co_long_runs: a.co_long_runs || b.co_long_runs,
            bound: if card == Finite { bound } else { None },
        }
    }
}

#[cfg(test)]
mod tests;
