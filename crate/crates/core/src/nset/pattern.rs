//! Residue patterns and piecewise-periodic decompositions of `[1, n]`.
//!
//! Every set built without a predicate node is, on any finite horizon, a
//! finite sequence of pieces `[start, next_start)` on each of which membership
//! is decided by a residue pattern `x mod m ∈ R`. Counting is then closed
//! form per piece, so algebra trees never need element enumeration.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{Nat, Rat};

/// Largest lcm the pattern algebra will enumerate when combining patterns.
pub(crate) const MAX_COMBINED_MODULUS: u64 = 1 << 22;

/// `x ∈ P  ⇔  x mod modulus ∈ residues`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Pattern {
    modulus: u64,
    residues: Vec<u64>,
}

impl Pattern {
    pub fn empty() -> Self {
        Pattern { modulus: 1, residues: Vec::new() }
    }

    pub fn full() -> Self {
        Pattern { modulus: 1, residues: vec![0] }
    }

    /// Builds a pattern from validated residues (sorted, distinct, `< modulus`)
    /// and reduces it to its minimal period.
    pub fn new(modulus: u64, residues: Vec<u64>) -> Self {
        debug_assert!(modulus >= 1);
        debug_assert!(residues.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(residues.last().is_none_or(|&r| r < modulus));
        if residues.is_empty() {
            return Pattern::empty();
        }
        if residues.len() as u64 == modulus {
            return Pattern::full();
        }
        if modulus > MAX_COMBINED_MODULUS {
            return Pattern { modulus, residues };
        }
        let mut member = vec![false; modulus as usize];
        for &r in &residues {
            member[r as usize] = true;
        }
        Self::from_indicator(&member)
    }

    fn from_indicator(member: &[bool]) -> Self {
        let mut m = member.len() as u64;
        for p in prime_factors(m) {
            while m.is_multiple_of(p) {
                let d = m / p;
                let periodic = (0..m).all(|x| member[x as usize] == member[(x % d) as usize]);
                if !periodic {
                    break;
                }
                m = d;
            }
        }
        let residues: Vec<u64> = (0..m).filter(|&x| member[x as usize]).collect();
        if residues.is_empty() {
            Pattern::empty()
        } else if residues.len() as u64 == m {
            Pattern::full()
        } else {
            Pattern { modulus: m, residues }
        }
    }

    #[cfg(test)]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.residues.len() as u64 == self.modulus
    }

    pub fn contains(&self, x: &Nat) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.is_full() {
            return true;
        }
        let r = (x % self.modulus).to_u64().expect("residue fits u64");
        self.residues.binary_search(&r).is_ok()
    }

    /// `|{0 ≤ x < y : x ∈ P}|`.
    pub fn count_below(&self, y: &Nat) -> Nat {
        if self.is_empty() {
            return Nat::zero();
        }
        if self.is_full() {
            return y.clone();
        }
        let (q, r) = y.div_rem(&BigUint::from(self.modulus));
        let r = r.to_u64().expect("remainder fits u64");
        let partial = self.residues.partition_point(|&x| x < r) as u64;
        q * self.residues.len() as u64 + partial
    }

    /// `|{lo ≤ x < hi : x ∈ P}|`, zero when `hi ≤ lo`.
    pub fn count_in(&self, lo: &Nat, hi: &Nat) -> Nat {
        if hi <= lo {
            return Nat::zero();
        }
        self.count_below(hi) - self.count_below(lo)
    }

    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Pattern::full();
        }
        if self.is_full() {
            return Pattern::empty();
        }
        let residues = (0..self.modulus).filter(|x| self.residues.binary_search(x).is_err()).collect();
        Pattern { modulus: self.modulus, residues }
    }

    pub fn combine(&self, other: &Pattern, op: SetOp) -> Result<Pattern> {
        // Constant patterns short-circuit without enumerating the lcm.
        match op {
            SetOp::Union => {
                if self.is_full() || other.is_empty() {
                    return Ok(self.clone());
                }
                if other.is_full() || self.is_empty() {
                    return Ok(other.clone());
                }
            }
            SetOp::Intersect => {
                if self.is_empty() || other.is_full() {
                    return Ok(self.clone());
                }
                if other.is_empty() || self.is_full() {
                    return Ok(other.clone());
                }
            }
            SetOp::Diff => {
                if self.is_empty() || other.is_empty() {
                    return Ok(self.clone());
                }
                if other.is_full() {
                    return Ok(Pattern::empty());
                }
                if self.is_full() {
                    return Ok(other.complement());
                }
            }
        }
        if self == other {
            return Ok(match op {
                SetOp::Union | SetOp::Intersect => self.clone(),
                SetOp::Diff => Pattern::empty(),
            });
        }
        let l = self.modulus.lcm(&other.modulus);
        if l > MAX_COMBINED_MODULUS {
            return Err(Error::EnumerationBudgetExceeded { horizon: BigUint::from(l), budget: MAX_COMBINED_MODULUS });
        }
        let a = self.indicator();
        let b = other.indicator();
        let member: Vec<bool> = (0..l as usize).map(|x| op.apply(a[x % a.len()], b[x % b.len()])).collect();
        Ok(Self::from_indicator(&member))
    }

    fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.modulus as usize];
        for &r in &self.residues {
            v[r as usize] = true;
        }
        v
    }

    /// Pattern of `{t·x : x ∈ P}`.
    pub fn scale(&self, t: u64) -> Option<Pattern> {
        if self.is_empty() {
            return Some(Pattern::empty());
        }
        if t == 1 {
            return Some(self.clone());
        }
        let modulus = self.modulus.checked_mul(t)?;
        let residues = self.residues.iter().map(|&r| r * t).collect();
        Some(Pattern { modulus, residues })
    }

    pub fn density(&self) -> Rat {
        Rat::new((self.residues.len() as u64).into(), self.modulus.into())
    }

    /// Elements of `[lo, hi)` in increasing order, at most `limit` of them.
    pub fn elements_in(&self, lo: &Nat, hi: &Nat, limit: usize, out: &mut Vec<Nat>) {
        if self.is_empty() || hi <= lo {
            return;
        }
        if self.is_full() {
            let mut x = lo.clone();
            while &x < hi && out.len() < limit {
                out.push(x.clone());
                x += 1u32;
            }
            return;
        }
        let m = BigUint::from(self.modulus);
        let (q, _) = lo.div_rem(&m);
        let mut base = q * &m;
        'outer: loop {
            for &r in &self.residues {
                let x = &base + r;
                if &x >= hi || out.len() >= limit {
                    break 'outer;
                }
                if &x >= lo {
                    out.push(x);
                }
            }
            base += &m;
        }
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SetOp {
    Union,
    Intersect,
    Diff,
}

impl SetOp {
    #[inline]
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            SetOp::Union => a || b,
            SetOp::Intersect => a && b,
            SetOp::Diff => a && !b,
        }
    }
}

/// Decomposition of `[1, end)` into consecutive pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Pieces {
    /// `(start, pattern)`; the first start is 1, starts strictly increase.
    parts: Vec<(Nat, Pattern)>,
    end: Nat,
}

impl Pieces {
    pub fn uniform(pattern: Pattern, end: Nat) -> Self {
        Pieces { parts: vec![(Nat::one(), pattern)], end }
    }

    /// Builds from intervals of members `[l, r)` (sorted, disjoint, `l ≥ 1`),
    /// clipped to `[1, end)`.
    pub fn from_intervals<'a>(intervals: impl IntoIterator<Item = (&'a Nat, &'a Nat)>, end: Nat) -> Self {
        let mut b = PiecesBuilder::new();
        for (l, r) in intervals {
            if *l >= end {
                break;
            }
            b.push(l.clone(), Pattern::full());
            let r = if *r > end { end.clone() } else { r.clone() };
            if r < end {
                b.push(r, Pattern::empty());
            }
        }
        b.finish(end)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Iterates `(start, stop, pattern)` with `stop` exclusive.
    pub fn iter(&self) -> impl Iterator<Item = (&Nat, &Nat, &Pattern)> {
        self.parts.iter().enumerate().map(move |(i, (s, p))| {
            let stop = self.parts.get(i + 1).map(|(n, _)| n).unwrap_or(&self.end);
            (s, stop, p)
        })
    }

    /// Members in `[1, end)`.
    pub fn count(&self) -> Nat {
        self.iter().map(|(s, e, p)| p.count_in(s, e)).sum()
    }

    pub fn map(&self, f: impl Fn(&Pattern) -> Pattern) -> Self {
        let mut b = PiecesBuilder::new();
        for (s, p) in &self.parts {
            b.push(s.clone(), f(p));
        }
        b.finish(self.end.clone())
    }

    /// `{t·x}` of these pieces, re-clipped to `[1, end)`.
    pub fn scale(&self, t: u64, end: Nat) -> Result<Self> {
        let mut b = PiecesBuilder::new();
        if t > 1 {
            b.push(Nat::one(), Pattern::empty());
        }
        for (s, p) in &self.parts {
            let start = s * t;
            if start >= end {
                break;
            }
            let scaled = p
                .scale(t)
                .ok_or_else(|| Error::EnumerationBudgetExceeded { horizon: end.clone(), budget: u64::MAX })?;
            b.push(start, scaled);
        }
        Ok(b.finish(end))
    }

    pub fn merge(&self, other: &Pieces, op: SetOp, max_pieces: u64) -> Result<Self> {
        debug_assert_eq!(self.end, other.end);
        let mut b = PiecesBuilder::new();
        let (mut i, mut j) = (0usize, 0usize);
        let mut cur = Nat::one();
        while cur < self.end {
            let next_a = self.parts.get(i + 1).map(|(n, _)| n).unwrap_or(&self.end);
            let next_b = other.parts.get(j + 1).map(|(n, _)| n).unwrap_or(&other.end);
            let pat = self.parts[i].1.combine(&other.parts[j].1, op)?;
            b.push(cur.clone(), pat);
            if b.parts.len() as u64 > max_pieces {
                return Err(Error::EnumerationBudgetExceeded { horizon: self.end.clone() - 1u32, budget: max_pieces });
            }
            let next = next_a.min(next_b).clone();
            if *next_a == next {
                i += 1;
            }
            if *next_b == next {
                j += 1;
            }
            cur = next;
        }
        Ok(b.finish(self.end.clone()))
    }

    pub fn elements(&self, limit: usize) -> Vec<Nat> {
        let mut out = Vec::new();
        for (s, e, p) in self.iter() {
            if out.len() >= limit {
                break;
            }
            p.elements_in(s, e, limit, &mut out);
        }
        out
    }
}

/// Accumulates pieces, coalescing neighbours with equal patterns.
pub(crate) struct PiecesBuilder {
    parts: Vec<(Nat, Pattern)>,
}

impl PiecesBuilder {
    pub fn new() -> Self {
        PiecesBuilder { parts: Vec::new() }
    }

    pub fn push(&mut self, start: Nat, pattern: Pattern) {
        if self.parts.is_empty() && !start.is_one() {
            self.parts.push((Nat::one(), Pattern::empty()));
        }
        if let Some((s, p)) = self.parts.last_mut() {
            if *s == start {
                *p = pattern;
                // Coalesce with the predecessor if the replacement made them equal.
                if self.parts.len() >= 2 && self.parts[self.parts.len() - 2].1 == self.parts[self.parts.len() - 1].1 {
                    self.parts.pop();
                }
                return;
            }
            if *p == pattern {
                return;
            }
        }
        self.parts.push((start, pattern));
    }

    pub fn finish(mut self, end: Nat) -> Pieces {
        if self.parts.is_empty() {
            self.parts.push((Nat::one(), Pattern::empty()));
        }
        Pieces { parts: self.parts, end }
    }
}
