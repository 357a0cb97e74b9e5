use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::*;
use crate::asymptotics::{IndexSequence, SampleOptions};
use crate::{rat, ratio, EvalConfig, Rat};

fn nat(x: u64) -> Nat {
    Nat::from(x)
}

fn ap(p: &PermutationRule, n: u64) -> u64 {
    p.apply(&nat(n)).unwrap().to_u64().unwrap()
}

fn odds_evens() -> PermutationRule {
    pairing_permutation(&SymbolicSet::odds(), &SymbolicSet::evens()).unwrap()
}

fn corpus() -> Vec<(&'static str, PermutationRule)> {
    let pair = odds_evens();
    let dexp_vs_threes =
        pairing_permutation(&SymbolicSet::dexp_blocks(), &SymbolicSet::periodic(3, [0]).unwrap()).unwrap();
    let overlapping = pairing_permutation(
        &SymbolicSet::periodic(6, [1, 2, 3]).unwrap(),
        &SymbolicSet::periodic(6, [3, 4, 5]).unwrap(),
    )
    .unwrap();
    let (restricted, _) = restrict_pairing(&pair, &SymbolicSet::finite([1u64, 9, 100]).unwrap()).unwrap();
    vec![
        ("id", PermutationRule::Identity),
        ("pair", pair.clone()),
        ("overlapping", overlapping),
        ("dexp-vs-threes", dexp_vs_threes),
        ("qswap", PermutationRule::QuarterBlockSwap),
        ("table", PermutationRule::table(vec![vec![nat(1), nat(5)], vec![nat(2), nat(3), nat(40)]]).unwrap()),
        ("restricted", restricted),
        ("comp", PermutationRule::compose(PermutationRule::QuarterBlockSwap, pair)),
        ("inv-comp", PermutationRule::compose(PermutationRule::QuarterBlockSwap, odds_evens()).inverse()),
    ]
}

#[test]
fn apply_examples() {
    assert_eq!(ap(&PermutationRule::Identity, 7), 7);
    let p = odds_evens();
    assert_eq!((ap(&p, 5), ap(&p, 6)), (6, 5));
    let q = PermutationRule::QuarterBlockSwap;
    assert_eq!((ap(&q, 5), ap(&q, 9)), (9, 5));
    assert_eq!((1..4).map(|n| ap(&q, n)).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert_eq!((ap(&q, 16), ap(&q, 47), ap(&q, 48)), (32, 31, 48));
    assert!(p.apply(&nat(0)).is_err());
    let t = PermutationRule::table(vec![vec![nat(1), nat(5)], vec![nat(2), nat(3)]]).unwrap();
    assert_eq!((ap(&t, 1), ap(&t, 5), ap(&t, 2), ap(&t, 3), ap(&t, 4)), (5, 1, 3, 2, 4));
    assert!(PermutationRule::table(vec![vec![nat(1), nat(2)], vec![nat(2), nat(3)]]).is_err());
}

#[test]
fn qswap_is_a_bijection_on_blocks() {
    let q = PermutationRule::QuarterBlockSwap;
    let mut seen = BTreeSet::new();
    for n in 1..4096u64 {
        let m = ap(&q, n);
        assert!(m < 4096);
        assert!(seen.insert(m));
        assert_eq!(ap(&q, m), n);
    }
}

#[test]
fn corpus_bijectivity() {
    for (name, p) in corpus() {
        let mut images = BTreeSet::new();
        for n in 1..=10_000u64 {
            let m = p.apply(&nat(n)).unwrap();
            assert_eq!(p.invert(&m).unwrap(), nat(n), "{name} at {n}");
            assert!(images.insert(m), "{name} not injective at {n}");
            let back = p.invert(&nat(n)).unwrap();
            assert_eq!(p.apply(&back).unwrap(), nat(n), "{name} inverse at {n}");
        }
    }
}

#[test]
fn compose_and_inverse_semantics() {
    let q = PermutationRule::QuarterBlockSwap;
    let p = odds_evens();
    let c = PermutationRule::compose(q.clone(), p.clone());
    let i = c.clone().inverse();
    for n in 1..500u64 {
        assert_eq!(ap(&c, n), ap(&q, ap(&p, n)));
        assert_eq!(i.apply(&nat(n)).unwrap(), c.invert(&nat(n)).unwrap());
    }
}

fn brute_defect(pi: &PermutationRule, n: u64) -> u64 {
    (1..=n).filter(|&k| ap(pi, k) > n).count() as u64
}

#[test]
fn defect_examples() {
    let opts = SampleOptions::default();
    let th = Thresholds::defect();
    let seq = IndexSequence::all(20_000).unwrap();
    let id = levy_defect_profile(&PermutationRule::Identity, &seq, DefectMode::default(), &th, &opts).unwrap();
    assert!(id.defects.iter().all(|d| d.is_zero()));
    assert_eq!(id.classification, Classification::LevyLikely);

    let p = levy_defect_profile(&odds_evens(), &seq, DefectMode::default(), &th, &opts).unwrap();
    for (n, d) in p.points.iter().zip(&p.defects) {
        let odd = n.to_u64().unwrap() % 2;
        assert_eq!(*d, ratio(&nat(odd), n));
    }
    assert_eq!(p.classification, Classification::LevyLikely);

    let q = levy_defect_profile(&PermutationRule::QuarterBlockSwap, &seq, DefectMode::default(), &th, &opts).unwrap();
    assert_eq!(q.defects[6], rat(4, 7));
    for j in 1..=6u32 {
        let f = 4i64.pow(j);
        assert_eq!(q.defects[(2 * f - 2) as usize], rat(f, 2 * f - 1));
    }
    assert_eq!(q.classification, Classification::NonLevyLikely);
}

#[test]
fn defect_modes_agree_with_brute_force() {
    let opts = SampleOptions::default();
    let th = Thresholds::defect();
    let seq = IndexSequence::all(1500).unwrap();
    for (name, p) in corpus() {
        let up = levy_defect_profile(&p, &seq, DefectMode::Upward, &th, &opts).unwrap();
        let down = levy_defect_profile(&p, &seq, DefectMode::Downward, &th, &opts).unwrap();
        assert_eq!(up.counts, down.counts, "{name}");
        for n in [1u64, 2, 7, 31, 100, 511, 1000, 1500] {
            assert_eq!(up.counts[n as usize - 1], nat(brute_defect(&p, n)), "{name} at {n}");
        }
    }
}

#[test]
fn pairing_defect_identity() {
    let opts = SampleOptions::default();
    let seq = IndexSequence::all(10_000).unwrap();
    for (name, p) in corpus() {
        let PermutationRule::InterlacedPairing(ph) = &p else { continue };
        let prof = levy_defect_profile(&p, &seq, DefectMode::default(), &Thresholds::defect(), &opts).unwrap();
        let (mut a, mut b) = (0i64, 0i64);
        for n in 1..=10_000u64 {
            a += ph.left().contains(&nat(n)).unwrap() as i64;
            b += ph.right().contains(&nat(n)).unwrap() as i64;
            assert_eq!(prof.counts[n as usize - 1], nat((a - b).unsigned_abs()), "{name} at {n}");
        }
    }
}

#[test]
fn witness_identity() {
    let eval = EvalConfig::default();
    let opts = SampleOptions::default();
    let horizon = 5000u64;
    let seq = IndexSequence::all(horizon).unwrap();
    for (name, p) in corpus() {
        let reach = (1..=horizon).map(|m| p.invert(&nat(m)).unwrap().to_u64().unwrap()).max().unwrap();
        let w = levy_witness_set(&p, reach.max(horizon), &eval).unwrap();
        let d = displacement_profile(&p, &w, &seq, &Thresholds::defect(), &opts).unwrap();
        let defect = levy_defect_profile(&p, &seq, DefectMode::default(), &Thresholds::defect(), &opts).unwrap();
        for i in 0..horizon as usize {
            assert_eq!(&d.set_counts[i] - &d.image_counts[i], defect.counts[i], "{name} at {}", i + 1);
        }
        assert_eq!(d.values, defect.defects);
    }
}

#[test]
fn compose_with_inverse_has_zero_defect() {
    let opts = SampleOptions::default();
    let seq = IndexSequence::all(3000).unwrap();
    for (name, p) in corpus() {
        let c = PermutationRule::compose(p.clone(), p.inverse());
        let prof = levy_defect_profile(&c, &seq, DefectMode::default(), &Thresholds::defect(), &opts).unwrap();
        assert!(prof.counts.iter().all(|c| c.is_zero()), "{name}");
    }
}

#[test]
fn displacement_examples() {
    let opts = SampleOptions::default();
    let th = Thresholds::defect();
    let seq = IndexSequence::explicit([7u64, 10, 100]).unwrap();
    for (_, p) in corpus() {
        let d = displacement_profile(&p, &SymbolicSet::Full, &seq, &th, &opts).unwrap();
        assert!(d.values.iter().all(|v| v.is_zero()));
    }
    let lower = lower_quarter_blocks(1000).unwrap();
    let d = displacement_profile(&PermutationRule::QuarterBlockSwap, &lower, &seq, &th, &opts).unwrap();
    assert_eq!(d.values[0], rat(4, 7));
    let d = displacement_profile(&odds_evens(), &SymbolicSet::odds(), &seq, &th, &opts).unwrap();
    assert_eq!(d.values[1], rat(0, 1));
    assert_eq!((d.set_counts[1].clone(), d.image_counts[1].clone()), (nat(5), nat(5)));
}

#[test]
fn ratio_stat_examples() {
    let opts = SampleOptions::default();
    let th = Thresholds::ratio_stat();
    let eps = [rat(1, 10), rat(1, 100)];
    let cps = IndexSequence::geometric(1000u64, 2, 7).unwrap();
    let r = ratio_stat_report(&PermutationRule::Identity, &eps, &cps, &th, &opts).unwrap();
    assert!(r.stat.rows.iter().all(|row| row.tail_max.is_zero()));
    assert_eq!(r.classification, Classification::LevyLikely);

    let r = ratio_stat_report(&odds_evens(), &eps, &cps, &th, &opts).unwrap();
    for row in &r.stat.rows {
        let bound = rat(2, 1) / &row.eps;
        for (n, d) in &row.densities {
            assert!(*d <= &bound / Rat::from_integer(n.clone().into()));
        }
    }
    assert_eq!(r.classification, Classification::LevyLikely);

    let r = ratio_stat_report(&PermutationRule::QuarterBlockSwap, &eps, &cps, &th, &opts).unwrap();
    assert_eq!(r.classification, Classification::NonLevyLikely);
    let at127 = ratio_stat_report(
        &PermutationRule::QuarterBlockSwap,
        &[rat(1, 5)],
        &IndexSequence::explicit([127u64]).unwrap(),
        &th,
        &opts,
    )
    .unwrap();
    let brute = (1..=127u64)
        .filter(|&k| {
            let v = ap(&PermutationRule::QuarterBlockSwap, k) as i64 - k as i64;
            5 * v.abs() >= k as i64
        })
        .count() as i64;
    assert_eq!(at127.stat.rows[0].densities[0].1, rat(brute, 127));
    assert!(rat(brute, 127) >= rat(64, 128));
}

#[test]
fn exceptional_set_examples() {
    let eval = EvalConfig::default();
    let cps = IndexSequence::explicit([50u64, 100]).unwrap();
    let id = exceptional_sets(&PermutationRule::Identity, &rat(1, 2), &cps, &eval).unwrap();
    assert!(id.above.count(&nat(100)).unwrap().is_zero() && id.below.count(&nat(100)).unwrap().is_zero());

    let q = exceptional_sets(&PermutationRule::QuarterBlockSwap, &rat(1, 2), &cps, &eval).unwrap();
    let above: Vec<u64> =
        q.above.enumerate(&nat(100), 1000, 1000).unwrap().iter().map(|x| x.to_u64().unwrap()).collect();
    assert!((4..8).all(|k| above.contains(&k)));
    // k − π(k) = 4^j ≤ k/2 on [2·4^j, 3·4^j): nothing moves down by more than half.
    assert!(q.below.count(&nat(100)).unwrap().is_zero());
    let q = exceptional_sets(&PermutationRule::QuarterBlockSwap, &rat(1, 4), &cps, &eval).unwrap();
    let below: Vec<u64> =
        q.below.enumerate(&nat(100), 1000, 1000).unwrap().iter().map(|x| x.to_u64().unwrap()).collect();
    assert_eq!(below, [8, 9, 10, 11].into_iter().chain(32..48).collect::<Vec<_>>());

    let p = exceptional_sets(&odds_evens(), &rat(1, 2), &cps, &eval).unwrap();
    assert_eq!(p.above, SymbolicSet::finite([1u64]).unwrap());
    assert!(p.below.count(&nat(100)).unwrap().is_zero());
    assert_eq!(p.profile[1], (nat(100), rat(1, 100), rat(0, 1), rat(1, 100)));
}

#[test]
fn pairing_construction() {
    assert_eq!(ap(&odds_evens(), 1), 2);
    let same = pairing_permutation(&SymbolicSet::dexp_blocks(), &SymbolicSet::dexp_blocks()).unwrap();
    assert!((1..2000u64).all(|n| ap(&same, n) == n));
    let e = pairing_permutation(&SymbolicSet::finite([1u64, 2]).unwrap(), &SymbolicSet::finite([5u64]).unwrap());
    assert!(matches!(e, Err(Error::CardinalityMismatch { .. })));
    let e = pairing_permutation(&SymbolicSet::finite([1u64, 2]).unwrap(), &SymbolicSet::odds());
    assert!(matches!(e, Err(Error::CardinalityMismatch { .. })));
    let f = pairing_permutation(&SymbolicSet::finite([1u64, 2]).unwrap(), &SymbolicSet::finite([2u64, 7]).unwrap())
        .unwrap();
    assert_eq!((ap(&f, 1), ap(&f, 7), ap(&f, 2)), (7, 1, 2));
    let pred = levy_witness_set(&PermutationRule::QuarterBlockSwap, 100, &EvalConfig::default()).unwrap();
    assert!(matches!(pairing_permutation(&pred, &SymbolicSet::odds()), Err(Error::UnknownInfinitude { .. })));
}

#[test]
fn pairing_beyond_cache() {
    let p = odds_evens();
    let n = 2 * PAIR_CACHE as u64 + 11;
    assert_eq!((ap(&p, n), ap(&p, n + 1)), (n + 1, n));
    let d = pairing_permutation(&SymbolicSet::dexp_blocks(), &SymbolicSet::periodic(3, [0]).unwrap()).unwrap();
    // b_i = 3·(rank of b among multiples of 3 outside A); spot-check the involution far out.
    for n in [300_001u64, 400_000, 1_000_000] {
        let m = d.apply(&nat(n)).unwrap();
        assert_eq!(d.apply(&m).unwrap(), nat(n));
    }
}

#[test]
fn restriction_examples() {
    let phi = odds_evens();
    let (same, warn) = restrict_pairing(&phi, &SymbolicSet::Empty).unwrap();
    assert!(warn.is_none());
    assert!((1..3000u64).all(|n| ap(&same, n) == ap(&phi, n)));

    let (psi, _) = restrict_pairing(&phi, &SymbolicSet::finite([1u64]).unwrap()).unwrap();
    assert_eq!((ap(&psi, 1), ap(&psi, 2)), (1, 2));
    assert!((2..3000u64).all(|k| ap(&psi, 2 * k - 1) == 2 * k && ap(&psi, 2 * k) == 2 * k - 1));
    let vd = van_douwen_ratio_report(&psi, &nat(10_000), &nat(1000), &rat(1, 1000), &EvalConfig::default()).unwrap();
    assert!(vd.holds);

    let (_, warn) = restrict_pairing(&phi, &SymbolicSet::evens()).unwrap();
    assert!(warn.is_some());
    assert!(restrict_pairing(&PermutationRule::QuarterBlockSwap, &SymbolicSet::Empty).is_err());
}

#[test]
fn van_douwen_examples() {
    let eval = EvalConfig::default();
    let tol = rat(1, 1000);
    let r = van_douwen_ratio_report(&PermutationRule::Identity, &nat(10_000), &nat(1000), &tol, &eval).unwrap();
    assert!(r.sup.is_zero() && r.holds);
    let r = van_douwen_ratio_report(&odds_evens(), &nat(10_000), &nat(1000), &tol, &eval).unwrap();
    assert_eq!((r.sup.clone(), r.argmax.clone()), (rat(1, 1000), nat(1000)));
    let r = van_douwen_ratio_report(&PermutationRule::QuarterBlockSwap, &nat(10_000), &nat(1000), &tol, &eval).unwrap();
    assert_eq!((r.sup.clone(), r.argmax.clone()), (rat(1, 1), nat(1024)));
    assert!(!r.holds);
}

#[test]
fn witness_set_examples() {
    let eval = EvalConfig::default();
    let w = levy_witness_set(&PermutationRule::Identity, 1000, &eval).unwrap();
    assert!(w.count(&nat(1000)).unwrap().is_zero());
    let w = levy_witness_set(&odds_evens(), 1000, &eval).unwrap();
    for n in [1u64, 2, 99, 1000] {
        assert_eq!(w.count(&nat(n)).unwrap(), SymbolicSet::odds().count(&nat(n)).unwrap());
    }
    let w = levy_witness_set(&PermutationRule::QuarterBlockSwap, 5000, &eval).unwrap();
    let lower = lower_quarter_blocks(5000).unwrap();
    assert!((1..=5000u64).all(|n| w.contains(&nat(n)).unwrap() == lower.contains(&nat(n)).unwrap()));
    assert!(w.count(&nat(5001)).is_err());
}

#[test]
fn restricted_pairing_maps_sides() {
    let a = SymbolicSet::periodic(5, [1, 2]).unwrap();
    let b = SymbolicSet::periodic(5, [2, 3, 4]).unwrap();
    let phi = pairing_permutation(&a, &b).unwrap();
    let f = SymbolicSet::finite([1u64, 8, 13, 44]).unwrap();
    let (psi, _) = restrict_pairing(&phi, &f).unwrap();
    let PermutationRule::InterlacedPairing(ph) = &phi else { unreachable!() };
    for n in 1..2000u64 {
        let x = nat(n);
        let m = ap(&phi, n);
        let in_e = (f.contains(&x).unwrap() || f.contains(&nat(m)).unwrap()) && m != n;
        if in_e {
            assert_eq!(ap(&psi, n), n);
        } else {
            assert_eq!(ap(&psi, n), m);
        }
        if ph.left().contains(&x).unwrap() && !in_e {
            assert!(ph.right().contains(&nat(ap(&psi, n))).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_periodic_pairings_are_involutions(m in 2u64..12, mask_a in any::<u16>(), mask_b in any::<u16>()) {
        let ra: Vec<u64> = (0..m).filter(|r| mask_a >> r & 1 == 1).collect();
        let rb: Vec<u64> = (0..m).filter(|r| mask_b >> r & 1 == 1).collect();
        let a = SymbolicSet::periodic(m, ra.clone()).unwrap();
        let b = SymbolicSet::periodic(m, rb.clone()).unwrap();
        let only_a = ra.iter().any(|r| !rb.contains(r));
        let only_b = rb.iter().any(|r| !ra.contains(r));
        let p = pairing_permutation(&a, &b);
        if only_a != only_b {
            let mismatch = matches!(p, Err(Error::CardinalityMismatch { .. }));
            prop_assert!(mismatch);
            return Ok(());
        }
        let p = p.unwrap();
        for n in 1..600u64 {
            let x = ap(&p, n);
            prop_assert_eq!(ap(&p, x), n);
            prop_assert_eq!(a.contains(&nat(n)).unwrap() && !b.contains(&nat(n)).unwrap(),
                b.contains(&nat(x)).unwrap() && !a.contains(&nat(x)).unwrap());
        }
    }
}
