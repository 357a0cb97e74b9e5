//! Text grammar for sets, permutations, index sequences and measure rules.
//!
//! ```text
//! SET  := empty | full | finite(N, …) | periodic(M; R, …) | blocks(dexp)
//!       | blocks([L,R), …) | scale(T, SET) | union(SET, SET) | inter(SET, SET)
//!       | diff(SET, SET) | compl(SET) | witness(PERM, CAP)
//! PERM := id | qswap | table((A B …)(C D …)…) | pair(SET, SET)
//!       | restrict(PERM, SET) | comp(PERM, PERM) | inv(PERM)
//! SEQ  := all(N) | explicit(N, …) | dexp(K) | doubled(SEQ) | geom(FIRST, RATIO, K)
//! MEAS := sublim(SEQ) | combo(SEQ) | mix(W: MEAS, …)
//! ```
//!
//! Integers may be written `a^b`. Weights are `p/q`, integers or decimals.
//! Every rule prints back in this grammar.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::asymptotics::IndexSequence;
use crate::error::Result;
use crate::measure::MeasureRule;
use crate::nset::{BlockSource, SymbolicSet};
use crate::perm::{levy_witness_set, pairing_permutation, restrict_pairing, PermutationRule};
use crate::{EvalConfig, Nat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Set,
    Perm,
    Seq,
    Measure,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Set(SymbolicSet),
    Perm(PermutationRule),
    Seq(IndexSequence),
    Measure(MeasureRule),
}

pub fn parse_expression(text: &str, kind: ExprKind, eval: &EvalConfig) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0, eval };
    let out = match kind {
        ExprKind::Set => Expr::Set(p.set()?),
        ExprKind::Perm => Expr::Perm(p.perm()?),
        ExprKind::Seq => Expr::Seq(p.seq()?),
        ExprKind::Measure => Expr::Measure(p.measure()?),
    };
    p.end()?;
    Ok(out)
}

pub fn parse_set(text: &str) -> Result<SymbolicSet> {
    let mut p = Parser { src: text, pos: 0, eval: &EvalConfig::default() };
    let s = p.set()?;
    p.end()?;
    Ok(s)
}

pub fn parse_perm(text: &str) -> Result<PermutationRule> {
    let mut p = Parser { src: text, pos: 0, eval: &EvalConfig::default() };
    let s = p.perm()?;
    p.end()?;
    Ok(s)
}

pub fn parse_seq(text: &str) -> Result<IndexSequence> {
    let mut p = Parser { src: text, pos: 0, eval: &EvalConfig::default() };
    let s = p.seq()?;
    p.end()?;
    Ok(s)
}

pub fn parse_measure(text: &str) -> Result<MeasureRule> {
    let mut p = Parser { src: text, pos: 0, eval: &EvalConfig::default() };
    let s = p.measure()?;
    p.end()?;
    Ok(s)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    eval: &'a EvalConfig,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(ParseError { position: self.pos, message: message.into() }.into())
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(f) => self.err(format!("expected `{c}`, found `{f}`")),
                None => self.err(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected `{c}` after a complete expression")),
        }
    }

    fn word(&mut self) -> (usize, &str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        (start, &self.src[start..start + len])
    }

    fn keyword(&mut self, options: &[&str]) -> Result<String> {
        let (start, w) = self.word();
        if options.contains(&w) {
            return Ok(w.to_string());
        }
        let w = w.to_string();
        self.pos = start;
        let hint = options.join(", ");
        if w.is_empty() {
            self.err(format!("expected one of: {hint}"))
        } else {
            self.err(format!("unknown `{w}`; expected one of: {hint}"))
        }
    }

    fn nat(&mut self) -> Result<Nat> {
        let base = self.digits()?;
        if self.eat('^') {
            let at = self.pos;
            let e = self.digits()?;
            let Some(e) = e.to_u32().filter(|&e| e <= 1 << 20) else {
                self.pos = at;
                return self.err("exponent too large");
            };
            return Ok(num_traits::pow(base, e as usize));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<Nat> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].find(|c: char| !c.is_ascii_digit()).unwrap_or(self.src.len() - start);
        if len == 0 {
            return self.err("expected an integer");
        }
        self.pos += len;
        Ok(self.src[start..start + len].parse().expect("ascii digits"))
    }

    fn small<T: TryFrom<u64>>(&mut self, what: &str) -> Result<T> {
        let at = self.pos;
        let n = self.nat()?;
        match n.to_u64().and_then(|x| T::try_from(x).ok()) {
            Some(v) => Ok(v),
            None => {
                self.pos = at;
                self.err(format!("{what} {n} is out of range"))
            }
        }
    }

    /// `p/q`, an integer, or a decimal.
    fn rational(&mut self) -> Result<Rat> {
        let whole = self.digits()?;
        if self.eat('/') {
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                self.pos = at;
                return self.err("zero denominator");
            }
            return Ok(Rat::new(whole.into(), den.into()));
        }
        if self.src[self.pos..].starts_with('.') {
            self.pos += 1;
            let start = self.pos;
            let frac = self.digits()?;
            let places = (self.pos - start) as u32;
            let scale = BigInt::from(10u32).pow(places);
            return Ok(Rat::new(BigInt::from(whole) * &scale + BigInt::from(frac), scale));
        }
        Ok(Rat::from_integer(whole.into()))
    }

    fn list<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn set(&mut self) -> Result<SymbolicSet> {
        let kw = self.keyword(&[
            "empty", "full", "finite", "periodic", "blocks", "scale", "union", "inter", "diff", "compl", "witness",
        ])?;
        match kw.as_str() {
            "empty" => Ok(SymbolicSet::Empty),
            "full" => Ok(SymbolicSet::Full),
            "finite" => {
                self.expect('(')?;
                let v = self.list(')', Self::nat)?;
                SymbolicSet::finite(v)
            }
            "periodic" => {
                self.expect('(')?;
                let m = self.small::<u64>("modulus")?;
                self.expect(';')?;
                let r = self.list(')', |p| p.small::<u64>("residue"))?;
                SymbolicSet::periodic(m, r)
            }
            "blocks" => {
                self.expect('(')?;
                if self.peek() == Some('d') {
                    self.keyword(&["dexp"])?;
                    self.expect(')')?;
                    return Ok(SymbolicSet::dexp_blocks());
                }
                let v = self.list(')', |p| {
                    p.expect('[')?;
                    let l = p.nat()?;
                    p.expect(',')?;
                    let r = p.nat()?;
                    p.expect(')')?;
                    Ok((l, r))
                })?;
                SymbolicSet::blocks(v)
            }
            "scale" => {
                self.expect('(')?;
                let t = self.small::<u64>("scale factor")?;
                self.expect(',')?;
                let s = self.set()?;
                self.expect(')')?;
                s.scale(t)
            }
            "union" | "inter" | "diff" => {
                self.expect('(')?;
                let a = self.set()?;
                self.expect(',')?;
                let b = self.set()?;
                self.expect(')')?;
                Ok(match kw.as_str() {
                    "union" => a.union(b),
                    "inter" => a.intersect(b),
                    _ => a.diff(b),
                })
            }
            "compl" => {
                self.expect('(')?;
                let a = self.set()?;
                self.expect(')')?;
                Ok(a.complement())
            }
            _ => {
                self.expect('(')?;
                let p = self.perm()?;
                self.expect(',')?;
                let cap = self.small::<u64>("cap")?;
                self.expect(')')?;
                levy_witness_set(&p, cap, self.eval)
            }
        }
    }

    fn perm(&mut self) -> Result<PermutationRule> {
        let kw = self.keyword(&["id", "qswap", "table", "pair", "restrict", "comp", "inv"])?;
        match kw.as_str() {
            "id" => Ok(PermutationRule::Identity),
            "qswap" => Ok(PermutationRule::QuarterBlockSwap),
            "table" => {
                self.expect('(')?;
                let mut cycles = Vec::new();
                while self.eat('(') {
                    let mut c = Vec::new();
                    while !self.eat(')') {
                        c.push(self.nat()?);
                    }
                    cycles.push(c);
                }
                self.expect(')')?;
                PermutationRule::table(cycles)
            }
            "pair" => {
                self.expect('(')?;
                let a = self.set()?;
                self.expect(',')?;
                let b = self.set()?;
                self.expect(')')?;
                pairing_permutation(&a, &b)
            }
            "restrict" => {
                self.expect('(')?;
                let p = self.perm()?;
                self.expect(',')?;
                let f = self.set()?;
                self.expect(')')?;
                Ok(restrict_pairing(&p, &f)?.0)
            }
            "comp" => {
                self.expect('(')?;
                let p = self.perm()?;
                self.expect(',')?;
                let q = self.perm()?;
                self.expect(')')?;
                Ok(PermutationRule::compose(p, q))
            }
            _ => {
                self.expect('(')?;
                let p = self.perm()?;
                self.expect(')')?;
                Ok(p.inverse())
            }
        }
    }

    fn seq(&mut self) -> Result<IndexSequence> {
        let kw = self.keyword(&["all", "explicit", "dexp", "doubled", "geom"])?;
        self.expect('(')?;
        let s = match kw.as_str() {
            "all" => IndexSequence::all(self.small("length")?)?,
            "explicit" => IndexSequence::explicit(self.list(')', Self::nat)?)?,
            "dexp" => IndexSequence::dexp(self.small("term count")?)?,
            "doubled" => self.seq()?.doubled(),
            _ => {
                let first = self.nat()?;
                self.expect(',')?;
                let ratio = self.small("ratio")?;
                self.expect(',')?;
                let count = self.small("term count")?;
                IndexSequence::geometric(first, ratio, count)?
            }
        };
        if kw != "explicit" {
            self.expect(')')?;
        }
        Ok(s)
    }

    fn measure(&mut self) -> Result<MeasureRule> {
        let kw = self.keyword(&["sublim", "combo", "mix"])?;
        self.expect('(')?;
        let m = match kw.as_str() {
            "sublim" => MeasureRule::sublim(self.seq()?),
            "combo" => MeasureRule::combo(self.seq()?),
            _ => {
                let terms = self.list(')', |p| {
                    let w = p.rational()?;
                    p.expect(':')?;
                    Ok((w, p.measure()?))
                })?;
                return MeasureRule::mixture(terms);
            }
        };
        self.expect(')')?;
        Ok(m)
    }
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl IntoIterator<Item = T>) -> fmt::Result {
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicSet::Empty => write!(f, "empty"),
            SymbolicSet::Full => write!(f, "full"),
            SymbolicSet::FiniteList(l) => {
                write!(f, "finite(")?;
                join(f, l.elements())?;
                write!(f, ")")
            }
            SymbolicSet::Periodic(p) => {
                write!(f, "periodic({};", p.modulus())?;
                join(f, p.residues())?;
                write!(f, ")")
            }
            SymbolicSet::Blocks(BlockSource::DoubleExponential) => write!(f, "blocks(dexp)"),
            SymbolicSet::Blocks(BlockSource::Explicit(b)) => {
                write!(f, "blocks(")?;
                join(f, b.intervals().iter().map(|(l, r)| format!("[{l},{r})")))?;
                write!(f, ")")
            }
            SymbolicSet::Scaled(t, inner) => write!(f, "scale({t},{inner})"),
            SymbolicSet::Predicate(p) => write!(f, "{}", p.label()),
            SymbolicSet::Union(a, b) => write!(f, "union({a},{b})"),
            SymbolicSet::Intersect(a, b) => write!(f, "inter({a},{b})"),
            SymbolicSet::Diff(a, b) => write!(f, "diff({a},{b})"),
            SymbolicSet::Complement(a) => write!(f, "compl({a})"),
        }
    }
}

impl fmt::Display for PermutationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutationRule::Identity => write!(f, "id"),
            PermutationRule::QuarterBlockSwap => write!(f, "qswap"),
            PermutationRule::FiniteTable(t) => {
                write!(f, "table(")?;
                for c in t.cycles() {
                    write!(f, "(")?;
                    for (i, x) in c.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{x}")?;
                    }
                    write!(f, ")")?;
                }
                write!(f, ")")
            }
            PermutationRule::InterlacedPairing(p) => {
                let (a, b) = p.sources();
                write!(f, "pair({a},{b})")
            }
            PermutationRule::Restricted(r) => {
                let (a, b) = r.base().sources();
                write!(f, "restrict(pair({a},{b}),{})", r.exceptional())
            }
            PermutationRule::Compose(p, q) => write!(f, "comp({p},{q})"),
            PermutationRule::Inverse(p) => write!(f, "inv({p})"),
        }
    }
}

impl fmt::Display for MeasureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureRule::SubsequenceLimit(s) => write!(f, "sublim({s})"),
            MeasureRule::BlumlingerCombo(s) => write!(f, "combo({s})"),
            MeasureRule::Mixture(terms) => {
                write!(f, "mix(")?;
                join(f, terms.iter().map(|(w, m)| format!("{w}: {m}")))?;
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::error::Error;
    use crate::rat;

    fn nat(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_set("periodic(2;0)").unwrap(), SymbolicSet::evens());
        assert_eq!(parse_set(" periodic( 4 ; 1 , 2,3 ) ").unwrap(), SymbolicSet::periodic(4, [1, 2, 3]).unwrap());
        assert_eq!(parse_set("blocks(dexp)").unwrap(), SymbolicSet::dexp_blocks());
        assert_eq!(parse_set("blocks([2^64,2^65))").unwrap().count(&(nat(1) << 70u32)).unwrap(), nat(1) << 64u32);
        let m = parse_measure("combo(dexp(4))").unwrap();
        assert_eq!(m, MeasureRule::combo(IndexSequence::dexp(4).unwrap()));
        let MeasureRule::BlumlingerCombo(s) = &m else { unreachable!() };
        assert_eq!(s.points().unwrap(), [4u64, 16, 256, 65536].map(Nat::from).to_vec());
        let p = parse_perm("pair(periodic(2;1), periodic(2;0))").unwrap();
        assert_eq!(p.apply(&nat(5)).unwrap(), nat(6));
        assert_eq!(p, pairing_permutation(&SymbolicSet::odds(), &SymbolicSet::evens()).unwrap());
        let t = parse_perm("table((1 5)(2 3))").unwrap();
        assert_eq!(t.apply(&nat(5)).unwrap(), nat(1));
        let mix = parse_measure("mix(1/2: sublim(all(100)), 0.5: combo(dexp(3)))").unwrap();
        let MeasureRule::Mixture(terms) = &mix else { unreachable!() };
        assert_eq!(terms[1].0, rat(1, 2));
    }

    #[test]
    fn parse_errors_point_at_the_problem() {
        let Err(Error::Parse(e)) = parse_set("union(full, nope)") else { panic!() };
        assert_eq!(e.position, 12);
        assert!(e.message.contains("expected one of"));
        let Err(Error::Parse(e)) = parse_set("periodic(2,0)") else { panic!() };
        assert_eq!(e.position, 10);
        assert!(e.message.contains("`;`"));
        assert!(matches!(parse_set("full junk"), Err(Error::Parse(_))));
        assert!(matches!(parse_seq("dexp(0)"), Err(Error::InvalidSequence(_))));
        assert!(matches!(parse_measure("mix(1/3: sublim(all(5)))"), Err(Error::InvalidMeasure(_))));
        assert!(matches!(parse_perm("pair(finite(1,2), finite(5))"), Err(Error::CardinalityMismatch { .. })));
    }

    #[test]
    fn witness_sets_print_and_reparse() {
        let w = parse_set("witness(qswap, 500)").unwrap();
        assert_eq!(w.to_string(), "witness(qswap,500)");
        let again = parse_set(&w.to_string()).unwrap();
        for n in 1..=500u64 {
            assert_eq!(w.contains(&nat(n)).unwrap(), again.contains(&nat(n)).unwrap());
        }
    }

    fn arb_set() -> impl Strategy<Value = SymbolicSet> {
        let leaf = prop_oneof![
            Just(SymbolicSet::Empty),
            Just(SymbolicSet::Full),
            Just(SymbolicSet::dexp_blocks()),
            prop::collection::vec(1u64..500, 0..5).prop_map(|v| SymbolicSet::finite(v).unwrap()),
            (1u64..12, any::<u16>())
                .prop_map(|(m, mask)| { SymbolicSet::periodic(m, (0..m).filter(|r| mask >> r & 1 == 1)).unwrap() }),
            prop::collection::btree_set(1u64..300, 0..6).prop_map(|s| {
                let v: Vec<u64> = s.into_iter().collect();
                SymbolicSet::blocks(v.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1]))).unwrap()
            }),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.intersect(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.diff(b)),
                inner.clone().prop_map(SymbolicSet::complement),
                (1u64..5, inner).prop_map(|(t, a)| a.scale(t).unwrap()),
            ]
        })
    }

    fn arb_seq() -> impl Strategy<Value = IndexSequence> {
        let leaf = prop_oneof![
            (1u64..50).prop_map(|n| IndexSequence::all(n).unwrap()),
            (1u32..6).prop_map(|k| IndexSequence::dexp(k).unwrap()),
            prop::collection::btree_set(1u64..10_000, 1..5).prop_map(|s| IndexSequence::explicit(s).unwrap()),
            (1u64..20, 2u64..5, 1u32..6).prop_map(|(a, r, k)| IndexSequence::geometric(a, r, k).unwrap()),
        ];
        leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(IndexSequence::doubled))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sets_round_trip(s in arb_set()) {
            let text = s.to_string();
            let back = parse_set(&text).unwrap();
            prop_assert_eq!(&back.to_string(), &text);
            for n in [1u64, 2, 3, 17, 100, 255, 256, 999] {
                prop_assert_eq!(back.count(&nat(n)).unwrap(), s.count(&nat(n)).unwrap());
            }
        }

        #[test]
        fn sequences_and_measures_round_trip(s in arb_seq(), t in arb_seq(), w in 1i64..9) {
            prop_assert_eq!(parse_seq(&s.to_string()).unwrap(), s.clone());
            let m = MeasureRule::mixture(vec![
                (rat(w, 10), MeasureRule::sublim(s)),
                (rat(10 - w, 10), MeasureRule::combo(t)),
            ]).unwrap();
            prop_assert_eq!(parse_measure(&m.to_string()).unwrap(), m);
        }

    }

    proptest! {
        // Each case builds several pairings with their 2^16-pair caches.
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn perms_round_trip(a in 1u64..6, flip in any::<bool>()) {
            let base = "pair(periodic(2;1),periodic(2;0))".to_string();
            let texts = [
                "id".to_string(),
                "qswap".to_string(),
                format!("table((1 {})(2 3 {}))", a + 10, a + 20),
                base.clone(),
                format!("restrict({base},finite({a}))"),
                format!("comp(qswap,{base})"),
                format!("inv(comp({base},qswap))"),
            ];
            for t in texts {
                let p = parse_perm(&t).unwrap();
                let printed = p.to_string();
                let q = parse_perm(&printed).unwrap();
                prop_assert_eq!(&q.to_string(), &printed);
                for n in 1..200u64 {
                    let x = if flip { q.invert(&nat(n)) } else { q.apply(&nat(n)) };
                    let y = if flip { p.invert(&nat(n)) } else { p.apply(&nat(n)) };
                    prop_assert_eq!(x.unwrap(), y.unwrap());
                }
            }
        }
    }
}
