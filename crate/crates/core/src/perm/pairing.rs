use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use super::PermutationRule;
use crate::error::{Error, Result};
use crate::nset::{Cardinality, SymbolicSet, DEFAULT_ENUMERATION_BUDGET};
use crate::Nat;

/// Number of leading `(a_i, b_i)` pairs materialized at construction.
pub const PAIR_CACHE: usize = 1 << 16;

/// The involution swapping `a_i ↔ b_i`, where `a_1 < a_2 < …` enumerate
/// `A′ = A ∖ B` and `b_1 < b_2 < …` enumerate `B′ = B ∖ A`.
pub struct Pairing {
    source: (SymbolicSet, SymbolicSet),
    a: SymbolicSet,
    b: SymbolicSet,
    cache_a: Vec<Nat>,
    cache_b: Vec<Nat>,
}

impl fmt::Debug for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pairing")
            .field("a", &self.source.0)
            .field("b", &self.source.1)
            .field("cached", &self.cache_a.len())
            .finish()
    }
}

impl PartialEq for Pairing {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

/// Builds the pairing permutation of `A` and `B`.
///
/// `A ∖ B` and `B ∖ A` must both be declared infinite or be finite of equal
/// size; an unknown infinitude flag is rejected.
pub fn pairing_permutation(a: &SymbolicSet, b: &SymbolicSet) -> Result<PermutationRule> {
    Ok(PermutationRule::InterlacedPairing(Arc::new(Pairing::new(a.clone(), b.clone())?)))
}

impl Pairing {
    pub fn new(a: SymbolicSet, b: SymbolicSet) -> Result<Self> {
        let a_only = a.clone().diff(b.clone());
        let b_only = b.clone().diff(a.clone());
        let sizes = [side_size(&a_only, "A ∖ B")?, side_size(&b_only, "B ∖ A")?];
        let len = match &sizes {
            [None, None] => PAIR_CACHE,
            [Some(x), Some(y)] if x == y => x.to_usize().unwrap_or(usize::MAX).min(PAIR_CACHE),
            [x, y] => {
                let show = |s: &Option<Nat>| s.as_ref().map_or("infinite".to_string(), Nat::to_string);
                return Err(Error::CardinalityMismatch { left: show(x), right: show(y) });
            }
        };
        let cache_a = leading(&a_only, len)?;
        let cache_b = leading(&b_only, len)?;
        Ok(Pairing { source: (a, b), a: a_only, b: b_only, cache_a, cache_b })
    }

    pub fn sources(&self) -> (&SymbolicSet, &SymbolicSet) {
        (&self.source.0, &self.source.1)
    }

    /// `A ∖ B`.
    pub fn left(&self) -> &SymbolicSet {
        &self.a
    }

    /// `B ∖ A`.
    pub fn right(&self) -> &SymbolicSet {
        &self.b
    }

    pub fn apply(&self, n: &Nat) -> Result<Nat> {
        if self.a.contains(n)? {
            let i = rank(&self.a, &self.cache_a, n)?;
            select(&self.b, &self.cache_b, &i)
        } else if self.b.contains(n)? {
            let i = rank(&self.b, &self.cache_b, n)?;
            select(&self.a, &self.cache_a, &i)
        } else {
            Ok(n.clone())
        }
    }

    pub(crate) fn predicate_cap(&self) -> Option<u64> {
        self.a.predicate_cap()
    }
}

/// `Some(size)` for a declared-finite set, `None` for a declared-infinite one.
fn side_size(s: &SymbolicSet, what: &str) -> Result<Option<Nat>> {
    match s.cardinality() {
        Cardinality::Infinite => Ok(None),
        Cardinality::Finite => {
            let bound = s.shape().bound.ok_or_else(|| Error::UnknownInfinitude { what: format!("size of {what}") })?;
            Ok(Some(s.count(&bound)?))
        }
        Cardinality::Unknown => Err(Error::UnknownInfinitude { what: what.to_string() }),
    }
}

fn leading(s: &SymbolicSet, len: usize) -> Result<Vec<Nat>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    // A predicate-backed side is cached only as far as its cap reaches.
    let last = match s.select(&Nat::from(len)) {
        Ok(x) => x,
        Err(Error::PredicateCapExceeded { cap, .. }) => Nat::from(cap),
        Err(e) => return Err(e),
    };
    s.enumerate(&last, len, DEFAULT_ENUMERATION_BUDGET)
}

fn rank(s: &SymbolicSet, cache: &[Nat], n: &Nat) -> Result<Nat> {
    match cache.last() {
        Some(last) if n <= last => match cache.binary_search(n) {
            Ok(i) => Ok(Nat::from(i + 1)),
            Err(_) => unreachable!("member of the set missing from its cache"),
        },
        _ => s.count(n),
    }
}

fn select(s: &SymbolicSet, cache: &[Nat], i: &Nat) -> Result<Nat> {
    match i.to_usize() {
        Some(k) if k >= 1 && k <= cache.len() => Ok(cache[k - 1].clone()),
        _ => s.select(i),
    }
}

/// A pairing φ modified to fix `E = F′ ∪ φF′`, where `F′ = A′ ∩ (F ∪ φF)`.
///
/// On a moved point n this amounts to: ψ(n) = n if n ∈ F or φ(n) ∈ F,
/// otherwise ψ(n) = φ(n). ψ is again an involution.
#[derive(Debug, PartialEq)]
pub struct Restriction {
    base: Arc<Pairing>,
    exceptional: SymbolicSet,
}

impl Restriction {
    pub fn base(&self) -> &Arc<Pairing> {
        &self.base
    }

    pub fn exceptional(&self) -> &SymbolicSet {
        &self.exceptional
    }

    pub fn apply(&self, n: &Nat) -> Result<Nat> {
        let m = self.base.apply(n)?;
        if m == *n || self.exceptional.contains(n)? || self.exceptional.contains(&m)? {
            Ok(n.clone())
        } else {
            Ok(m)
        }
    }

    pub(crate) fn predicate_cap(&self) -> Option<u64> {
        match (self.base.predicate_cap(), self.exceptional.predicate_cap()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Restricts a pairing so that it fixes the exceptional set built from `f`.
///
/// The construction is meant for sets of density zero. Returns a warning
/// alongside the rule when the closed-form density of `f` is known and
/// positive, or unknown.
pub fn restrict_pairing(phi: &PermutationRule, f: &SymbolicSet) -> Result<(PermutationRule, Option<String>)> {
    let PermutationRule::InterlacedPairing(base) = phi else {
        return Err(Error::InvalidPermutation("restrict expects a pairing permutation".into()));
    };
    let warning = match f.density_closed_form() {
        Some(d) if d.is_zero() => None,
        Some(d) => Some(format!("exceptional set has density {d}, not 0")),
        None => Some("exceptional set has no closed-form density; zero density not verified".to_string()),
    };
    let r = Restriction { base: base.clone(), exceptional: f.clone() };
    Ok((PermutationRule::Restricted(Arc::new(r)), warning))
}
