use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::Nat;

/// Membership rule of a predicate set.
pub type MembershipRule = Arc<dyn Fn(&Nat) -> Result<bool> + Send + Sync>;

/// A set given by a membership rule on `[1, cap]`.
///
/// The rule is evaluated once for every `k ≤ cap` at construction and the
/// answers are kept as a rank-select bit table; queries beyond `cap` fail.
#[derive(Clone)]
pub struct PredicateSet {
    label: Arc<str>,
    cap: u64,
    rule: MembershipRule,
    table: Arc<RankTable>,
}

impl PredicateSet {
    pub fn new(label: impl Into<String>, cap: u64, rule: MembershipRule, exec: Execution) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidSet("predicate cap must be positive".into()));
        }
        let table = RankTable::build(cap, &rule, exec)?;
        Ok(PredicateSet { label: Arc::from(label.into()), cap, rule, table: Arc::new(table) })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Evaluates the underlying rule directly, bypassing the table.
    pub fn eval_rule(&self, n: &Nat) -> Result<bool> {
        (self.rule)(n)
    }

    fn check(&self, n: &Nat) -> Result<u64> {
        match n.to_u64() {
            Some(k) if k <= self.cap => Ok(k),
            _ => Err(Error::PredicateCapExceeded { label: self.label.to_string(), n: n.clone(), cap: self.cap }),
        }
    }

    pub fn contains(&self, n: &Nat) -> Result<bool> {
        let k = self.check(n)?;
        Ok(k >= 1 && self.table.bit(k))
    }

    pub fn count(&self, n: &Nat) -> Result<Nat> {
        let k = self.check(n)?;
        Ok(Nat::from(self.table.rank(k)))
    }

    pub(crate) fn same_as(&self, other: &PredicateSet) -> bool {
        Arc::ptr_eq(&self.table, &other.table)
    }
}

impl fmt::Debug for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateSet").field("label", &self.label).field("cap", &self.cap).finish_non_exhaustive()
    }
}

/// Bit `k − 1` of `words` records membership of `k`; `before[w]` counts set
/// bits in words `< w`.
struct RankTable {
    words: Vec<u64>,
    before: Vec<u64>,
}

impl RankTable {
    fn build(cap: u64, rule: &MembershipRule, exec: Execution) -> Result<Self> {
        let nwords = cap.div_ceil(64) as usize;
        let idx: Vec<usize> = (0..nwords).collect();
        let words = par::try_map(exec, &idx, |&w| -> Result<u64> {
            let base = w as u64 * 64;
            let mut word = 0u64;
            for bit in 0..64u64 {
                let k = base + bit + 1;
                if k > cap {
                    break;
                }
                if rule(&Nat::from(k))? {
                    word |= 1 << bit;
                }
            }
            Ok(word)
        })?;
        let mut before = Vec::with_capacity(nwords + 1);
        let mut acc = 0u64;
        for w in &words {
            before.push(acc);
            acc += u64::from(w.count_ones());
        }
        before.push(acc);
        Ok(RankTable { words, before })
    }

    fn bit(&self, k: u64) -> bool {
        let i = k - 1;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Members in `[1, k]`.
    fn rank(&self, k: u64) -> u64 {
        let w = (k / 64) as usize;
        let rem = k % 64;
        let partial = if rem == 0 { 0 } else { u64::from((self.words[w] & ((1u64 << rem) - 1)).count_ones()) };
        self.before[w] + partial
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_rule() {
        let rule: MembershipRule = Arc::new(|n: &Nat| Ok(n % 3u32 == Nat::from(1u32)));
        let p = PredicateSet::new("1 mod 3", 1000, rule, Execution::Parallel).unwrap();
        let mut c = 0u64;
        for k in 1..=1000u64 {
            let m = k % 3 == 1;
            c += m as u64;
            assert_eq!(p.contains(&Nat::from(k)).unwrap(), m);
            assert_eq!(p.count(&Nat::from(k)).unwrap(), Nat::from(c));
        }
        assert_eq!(p.count(&Nat::from(0u32)).unwrap(), Nat::from(0u32));
    }

    #[test]
    fn beyond_cap_is_rejected() {
        let rule: MembershipRule = Arc::new(|_: &Nat| Ok(true));
        let p = PredicateSet::new("all", 10, rule, Execution::Sequential).unwrap();
        assert!(matches!(p.count(&Nat::from(11u32)), Err(Error::PredicateCapExceeded { cap: 10, .. })));
    }
}
