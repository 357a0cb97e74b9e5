use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn nat(x: u64) -> Nat {
    Nat::from(x)
}

fn count(s: &SymbolicSet, n: u64) -> u64 {
    s.count(&nat(n)).unwrap().to_u64().unwrap()
}

/// Membership in `⋃ [2^(2^i), 2^(2^i+1))` by walking the intervals directly.
fn dexp_oracle(n: u64) -> bool {
    (1..=5u32).any(|i| {
        let l = 1u64 << (1u32 << i);
        l <= n && n < 2 * l
    })
}

#[test]
fn membership_examples() {
    assert!(SymbolicSet::evens().contains(&nat(10)).unwrap());
    assert!(SymbolicSet::dexp_blocks().contains(&nat(16)).unwrap());
    let two_a = SymbolicSet::dexp_blocks().scale(2).unwrap();
    assert!(!two_a.contains(&nat(9)).unwrap());
    assert!(!SymbolicSet::Full.contains(&nat(0)).unwrap());
}

#[test]
fn dexp_membership_matches_oracle() {
    let a = SymbolicSet::dexp_blocks();
    for n in 1..=70_000u64 {
        assert_eq!(a.contains(&nat(n)).unwrap(), dexp_oracle(n), "n = {n}");
    }
}

#[test]
fn count_examples() {
    let a = SymbolicSet::dexp_blocks();
    assert_eq!(count(&SymbolicSet::evens(), 10), 5);
    assert_eq!(count(&a, 511), 276);
    assert_eq!(count(&a, 65536), 277);
    assert_eq!(count(&a.scale(2).unwrap(), 512), 21);
    assert_eq!(count(&a.scale(2).unwrap(), 256), 20);
    let naturals = SymbolicSet::periodic(1, [0]).unwrap();
    assert_eq!(count(&naturals.scale(2).unwrap(), 10), 5);
}

#[test]
fn dexp_count_matches_enumeration() {
    let a = SymbolicSet::dexp_blocks();
    let mut c = 0u64;
    for n in 1..=140_000u64 {
        c += dexp_oracle(n) as u64;
        if n % 97 == 0 || n.is_power_of_two() || (n + 1).is_power_of_two() {
            assert_eq!(count(&a, n), c, "n = {n}");
        }
    }
}

#[test]
fn dexp_count_at_huge_horizon() {
    // Blocks below 2^64 hold 4 + 16 + 256 + 65536 + 2^32 elements.
    let a = SymbolicSet::dexp_blocks();
    let n = (Nat::one() << 65u32) - 1u32;
    let expect = nat(4 + 16 + 256 + 65536) + (Nat::one() << 32u32) + (Nat::one() << 64u32);
    assert_eq!(a.count(&n).unwrap(), expect);
}

#[test]
fn select_examples() {
    assert_eq!(SymbolicSet::evens().select(&nat(3)).unwrap(), nat(6));
    assert_eq!(SymbolicSet::dexp_blocks().select(&nat(5)).unwrap(), nat(16));
    let f = SymbolicSet::finite([3u64, 9]).unwrap();
    assert!(matches!(f.select(&nat(3)), Err(Error::IndexBeyondSet { .. })));
    assert_eq!(f.select(&nat(2)).unwrap(), nat(9));
    assert!(SymbolicSet::Empty.select(&nat(1)).is_err());
}

#[test]
fn select_on_algebra_and_predicate() {
    let odd_multiples_of_3 = SymbolicSet::periodic(3, [0]).unwrap().intersect(SymbolicSet::odds());
    assert_eq!(odd_multiples_of_3.select(&nat(4)).unwrap(), nat(21));
    let empty = SymbolicSet::odds().intersect(SymbolicSet::evens());
    assert_eq!(empty.cardinality(), Cardinality::Finite);
    assert!(matches!(empty.select(&nat(1)), Err(Error::IndexBeyondSet { .. })));

    let rule: MembershipRule = Arc::new(|n: &Nat| Ok(n % 5u32 == Nat::zero()));
    let p = SymbolicSet::Predicate(PredicateSet::new("5ℕ", 100, rule, crate::Execution::Sequential).unwrap());
    assert_eq!(p.select(&nat(20)).unwrap(), nat(100));
    assert!(matches!(p.select(&nat(21)), Err(Error::PredicateCapExceeded { .. })));
}

#[test]
fn scale_edge_cases() {
    let s = SymbolicSet::periodic(5, [1, 2]).unwrap();
    assert_eq!(s.scale(1).unwrap(), s);
    assert!(s.scale(0).is_err());
    for set in [SymbolicSet::Full, SymbolicSet::dexp_blocks(), s] {
        assert!(!set.scale(3).unwrap().contains(&nat(7)).unwrap());
    }
}

#[test]
fn constructor_validation() {
    assert!(SymbolicSet::finite([0u64, 2]).is_err());
    assert!(SymbolicSet::periodic(0, []).is_err());
    assert!(SymbolicSet::periodic(3, [3]).is_err());
    assert!(SymbolicSet::periodic(3, [1, 1]).is_err());
    assert!(SymbolicSet::blocks([(5u64, 5u64)]).is_err());
    assert!(SymbolicSet::blocks([(4u64, 8u64), (6, 9)]).is_err());
    assert!(SymbolicSet::blocks([(0u64, 3u64)]).is_err());
    assert!(SymbolicSet::blocks([(4u64, 8u64), (8, 9)]).is_ok());
}

#[test]
fn predicate_in_algebra_is_capped() {
    let rule: MembershipRule = Arc::new(|n: &Nat| Ok(n.bits() % 2 == 1));
    let p =
        SymbolicSet::Predicate(PredicateSet::new("odd bit length", 1000, rule, crate::Execution::Sequential).unwrap());
    let u = p.clone().union(SymbolicSet::evens());
    let brute = (1..=1000u64).filter(|&k| (64 - k.leading_zeros()) % 2 == 1 || k % 2 == 0).count() as u64;
    assert_eq!(count(&u, 1000), brute);
    assert!(matches!(u.count(&nat(1001)), Err(Error::PredicateCapExceeded { .. })));
    // Budget below the horizon is refused even when the cap allows it.
    assert!(matches!(u.count_with(&nat(500), 100), Err(Error::EnumerationBudgetExceeded { .. })));
}

#[test]
fn infinitude_flags() {
    use Cardinality::*;
    let a = SymbolicSet::dexp_blocks();
    assert_eq!(a.cardinality(), Infinite);
    assert_eq!(a.complement_cardinality(), Infinite);
    assert_eq!(SymbolicSet::odds().diff(SymbolicSet::evens()).cardinality(), Infinite);
    assert_eq!(SymbolicSet::finite([1u64, 2]).unwrap().cardinality(), Finite);
    assert_eq!(SymbolicSet::finite([1u64]).unwrap().complement_cardinality(), Infinite);
    assert_eq!(a.clone().intersect(SymbolicSet::periodic(3, [1]).unwrap()).cardinality(), Infinite);
    assert_eq!(a.clone().diff(SymbolicSet::evens()).cardinality(), Infinite);
    assert_eq!(a.clone().intersect(a.clone().complement()).cardinality(), Unknown);
    assert_eq!(a.scale(2).unwrap().complement_cardinality(), Infinite);
    assert_eq!(SymbolicSet::Full.complement_cardinality(), Finite);
    let rule: MembershipRule = Arc::new(|_: &Nat| Ok(true));
    let p = SymbolicSet::Predicate(PredicateSet::new("p", 10, rule, crate::Execution::Sequential).unwrap());
    assert_eq!(p.cardinality(), Unknown);
    assert_eq!(p.union(SymbolicSet::odds()).cardinality(), Infinite);
}

#[test]
fn closed_form_densities() {
    let d = |s: SymbolicSet| s.density_closed_form();
    assert_eq!(d(SymbolicSet::periodic(4, [1, 2, 3]).unwrap()), Some(crate::rat(3, 4)));
    assert_eq!(d(SymbolicSet::finite([5u64]).unwrap()), Some(crate::rat(0, 1)));
    assert_eq!(d(SymbolicSet::Full.scale(2).unwrap()), Some(crate::rat(1, 2)));
    assert_eq!(d(SymbolicSet::periodic(3, [0]).unwrap().complement()), Some(crate::rat(2, 3)));
    assert_eq!(d(SymbolicSet::dexp_blocks()), None);
}

#[test]
fn breakpoints_of_blocks() {
    let a = SymbolicSet::dexp_blocks();
    let b = a.breakpoints(&nat(1024), &nat(1 << 20), DEFAULT_ENUMERATION_BUDGET).unwrap().unwrap();
    assert!(b.contains(&nat(65535)));
    assert!(b.contains(&nat(65536)));
    assert!(b.contains(&nat(131071)));
    assert!(b.contains(&nat(1 << 20)));
}

#[test]
fn enumerate_via_pieces_and_scan() {
    let s = SymbolicSet::periodic(3, [1]).unwrap().union(SymbolicSet::finite([2u64]).unwrap());
    let v = s.enumerate(&nat(12), 100, 1000).unwrap();
    assert_eq!(v, [1u64, 2, 4, 7, 10].map(nat).to_vec());
    let rule: MembershipRule = Arc::new(|n: &Nat| Ok(n > &nat(6)));
    let p = SymbolicSet::Predicate(PredicateSet::new(">6", 20, rule, crate::Execution::Sequential).unwrap());
    assert_eq!(p.enumerate(&nat(20), 3, 1000).unwrap(), [7u64, 8, 9].map(nat).to_vec());
}

// ---- oracle-backed algebra ----

#[derive(Clone, Debug)]
enum Tree {
    Finite(BTreeSet<u64>),
    Periodic(u64, BTreeSet<u64>),
    Blocks(Vec<(u64, u64)>),
    Scaled(u64, Box<Tree>),
    Union(Box<Tree>, Box<Tree>),
    Inter(Box<Tree>, Box<Tree>),
    Diff(Box<Tree>, Box<Tree>),
    Compl(Box<Tree>),
}

impl Tree {
    fn member(&self, n: u64) -> bool {
        match self {
            Tree::Finite(s) => s.contains(&n),
            Tree::Periodic(m, r) => r.contains(&(n % m)),
            Tree::Blocks(b) => b.iter().any(|&(l, r)| l <= n && n < r),
            Tree::Scaled(t, s) => n.is_multiple_of(*t) && s.member(n / t),
            Tree::Union(a, b) => a.member(n) || b.member(n),
            Tree::Inter(a, b) => a.member(n) && b.member(n),
            Tree::Diff(a, b) => a.member(n) && !b.member(n),
            Tree::Compl(a) => !a.member(n),
        }
    }

    fn build(&self) -> SymbolicSet {
        match self {
            Tree::Finite(s) => SymbolicSet::finite(s.iter().copied()).unwrap(),
            Tree::Periodic(m, r) => SymbolicSet::periodic(*m, r.iter().copied()).unwrap(),
            Tree::Blocks(b) => SymbolicSet::blocks(b.iter().copied()).unwrap(),
            Tree::Scaled(t, s) => s.build().scale(*t).unwrap(),
            Tree::Union(a, b) => a.build().union(b.build()),
            Tree::Inter(a, b) => a.build().intersect(b.build()),
            Tree::Diff(a, b) => a.build().diff(b.build()),
            Tree::Compl(a) => a.build().complement(),
        }
    }
}

fn leaf() -> impl Strategy<Value = Tree> {
    prop_oneof![
        prop::collection::btree_set(1u64..400, 0..12).prop_map(Tree::Finite),
        (1u64..13)
            .prop_flat_map(|m| (Just(m), prop::collection::btree_set(0..m, 0..=m as usize)))
            .prop_map(|(m, r)| Tree::Periodic(m, r)),
        prop::collection::vec((1u64..60, 1u64..60), 0..5).prop_map(|gaps| {
            let mut out = Vec::new();
            let mut at = 1u64;
            for (gap, len) in gaps {
                at += gap;
                out.push((at, at + len));
                at += len;
            }
            Tree::Blocks(out)
        }),
    ]
}

fn tree() -> impl Strategy<Value = Tree> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (1u64..5, inner.clone()).prop_map(|(t, s)| Tree::Scaled(t, Box::new(s))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Union(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Inter(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Diff(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Tree::Compl(Box::new(a))),
        ]
    })
}

#[test]
fn algebra_matches_enumeration_to_ten_thousand() {
    let p2 = Tree::Periodic(2, [0].into());
    let p3 = Tree::Periodic(3, [1, 2].into());
    let f = Tree::Finite([3, 10, 11, 500, 9999].into());
    let b = Tree::Blocks(vec![(100, 200), (1000, 5000)]);
    let trees = [
        Tree::Union(Box::new(p2.clone()), Box::new(f.clone())),
        Tree::Diff(Box::new(p3.clone()), Box::new(b.clone())),
        Tree::Compl(Box::new(Tree::Inter(Box::new(p2.clone()), Box::new(p3.clone())))),
        Tree::Scaled(3, Box::new(Tree::Union(Box::new(b), Box::new(f)))),
    ];
    for t in &trees {
        let s = t.build();
        let mut c = 0u64;
        for n in 1..=10_000u64 {
            c += t.member(n) as u64;
            assert_eq!(count(&s, n), c, "{t:?} at {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_matches_oracle(t in tree(), probes in prop::collection::vec(1u64..3000, 20)) {
        let s = t.build();
        let mut prefix = vec![0u64; 3001];
        for n in 1..=3000 {
            prefix[n] = prefix[n - 1] + t.member(n as u64) as u64;
            prop_assert_eq!(s.contains(&nat(n as u64)).unwrap(), t.member(n as u64));
        }
        for n in probes.into_iter().chain([1, 2, 3000]) {
            prop_assert_eq!(count(&s, n), prefix[n as usize]);
        }
    }

    #[test]
    fn monotone_unit_steps(t in tree(), n in 1u64..5000) {
        let s = t.build();
        let prev = count(&s, n - 1);
        let cur = count(&s, n);
        prop_assert_eq!(cur - prev, s.contains(&nat(n)).unwrap() as u64);
    }

    #[test]
    fn complement_and_scaling(t in tree(), n in 0u64..5000, f in 1u64..7) {
        let s = t.build();
        prop_assert_eq!(count(&s.clone().complement(), n), n - count(&s, n));
        prop_assert_eq!(count(&s.scale(f).unwrap(), n), count(&s, n / f));
    }

    #[test]
    fn doubling_sandwich(t in tree(), n in 1u64..100_000) {
        let s = t.build();
        let (a, b) = (count(&s, n), count(&s, 2 * n));
        prop_assert!(a <= b && b <= a + n);
    }

    #[test]
    fn select_is_galois_inverse(t in tree(), n in 1u64..3000) {
        let s = t.build();
        let c = s.count(&nat(n)).unwrap();
        if !c.is_zero() {
            let x = s.select(&c).unwrap();
            prop_assert!(x <= nat(n));
            prop_assert!(s.contains(&x).unwrap());
            prop_assert_eq!(s.count(&x).unwrap(), c);
        }
    }

    #[test]
    fn declared_finite_sets_really_stop(t in tree()) {
        let s = t.build();
        let shape = s.shape();
        if let Some((thr, p)) = &shape.eventual {
            let thr = thr.to_u64().unwrap().min(20_000);
            for n in thr..thr + 300 {
                prop_assert_eq!(p.contains(&nat(n)), t.member(n));
            }
        }
    }
}
