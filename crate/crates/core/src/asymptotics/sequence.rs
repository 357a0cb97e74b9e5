use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nset::dexp_interval;
use crate::Nat;

/// Strictly increasing evaluation points; the finite stand-in for an
/// ultrafilter (a limit "along F" becomes a limit along these points).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexSequence {
    /// `1, 2, …, N`.
    All(u64),
    Explicit(Vec<Nat>),
    /// `2^(2^i)` for `i = 1..=K`: 4, 16, 256, 65536, …
    DoubleExponential(u32),
    /// Every point of the inner sequence doubled.
    Doubled(Box<IndexSequence>),
    /// `first · ratio^j` for `j < count`.
    Geometric {
        first: Nat,
        ratio: u64,
        count: u32,
    },
}

/// Largest supported `K` for [`IndexSequence::DoubleExponential`]; the last
/// point then has 2^24 bits.
pub const MAX_DEXP_TERMS: u32 = 24;

impl IndexSequence {
    pub fn all(n: u64) -> Result<Self> {
        let s = IndexSequence::All(n);
        s.validate()?;
        Ok(s)
    }

    pub fn explicit<I: IntoIterator<Item = T>, T: Into<Nat>>(points: I) -> Result<Self> {
        let s = IndexSequence::Explicit(points.into_iter().map(Into::into).collect());
        s.validate()?;
        Ok(s)
    }

    pub fn dexp(k: u32) -> Result<Self> {
        let s = IndexSequence::DoubleExponential(k);
        s.validate()?;
        Ok(s)
    }

    pub fn doubled(self) -> Self {
        IndexSequence::Doubled(Box::new(self))
    }

    pub fn geometric(first: impl Into<Nat>, ratio: u64, count: u32) -> Result<Self> {
        let s = IndexSequence::Geometric { first: first.into(), ratio, count };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSequence(m.to_string()));
        match self {
            IndexSequence::All(0) => bad("all(N) needs N ≥ 1"),
            IndexSequence::Explicit(v) if v.is_empty() => bad("explicit sequence is empty"),
            IndexSequence::Explicit(v) if v[0].is_zero() => bad("points start at 1"),
            IndexSequence::Explicit(v) if v.windows(2).any(|w| w[0] >= w[1]) => {
                bad("explicit points must strictly increase")
            }
            IndexSequence::DoubleExponential(k) if *k == 0 || *k > MAX_DEXP_TERMS => {
                bad(&format!("dexp(K) needs 1 ≤ K ≤ {MAX_DEXP_TERMS}"))
            }
            IndexSequence::Doubled(inner) => inner.validate(),
            IndexSequence::Geometric { first, ratio, count } => {
                if first.is_zero() {
                    bad("geometric sequence starts at 1 or later")
                } else if *ratio < 2 {
                    bad("geometric ratio must be at least 2")
                } else if *count == 0 {
                    bad("geometric sequence needs at least one point")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            IndexSequence::All(n) => *n as usize,
            IndexSequence::Explicit(v) => v.len(),
            IndexSequence::DoubleExponential(k) => *k as usize,
            IndexSequence::Doubled(inner) => inner.len(),
            IndexSequence::Geometric { count, .. } => *count as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Result<Vec<Nat>> {
        self.validate()?;
        Ok(match self {
            IndexSequence::All(n) => (1..=*n).map(Nat::from).collect(),
            IndexSequence::Explicit(v) => v.clone(),
            IndexSequence::DoubleExponential(k) => (1..=*k).map(|i| dexp_interval(i).0).collect(),
            IndexSequence::Doubled(inner) => inner.points()?.into_iter().map(|p| p << 1u32).collect(),
            IndexSequence::Geometric { first, ratio, count } => {
                let mut out = Vec::with_capacity(*count as usize);
                let mut x = first.clone();
                for _ in 0..*count {
                    out.push(x.clone());
                    x *= *ratio;
                }
                out
            }
        })
    }

    /// The last (largest) point.
    pub fn last_point(&self) -> Result<Nat> {
        self.validate()?;
        Ok(match self {
            IndexSequence::All(n) => Nat::from(*n),
            IndexSequence::Explicit(v) => v.last().cloned().unwrap_or_else(Nat::one),
            _ => self.points()?.pop().unwrap_or_else(Nat::one),
        })
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSequence::All(n) => write!(f, "all({n})"),
            IndexSequence::Explicit(v) => {
                write!(f, "explicit(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            IndexSequence::DoubleExponential(k) => write!(f, "dexp({k})"),
            IndexSequence::Doubled(inner) => write!(f, "doubled({inner})"),
            IndexSequence::Geometric { first, ratio, count } => write!(f, "geom({first},{ratio},{count})"),
        }
    }
}
