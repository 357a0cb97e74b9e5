//! Numeric flag parsers: counts like `1e5`, `10^5`, `2^20`; rationals like `1/1000`, `0.001`, `1e-3`.

use densitylab::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let bad = || format!("`{s}` is not a nonnegative integer (forms: 100000, 1e5, 10^5)");
    if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(|| format!("`{s}` overflows 64 bits"));
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| format!("`{s}` overflows 64 bits"));
    }
    s.parse().map_err(|_| bad())
}

/// Exact rational from `p/q`, a decimal, or scientific notation.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    let bad = || format!("`{t}` is not a rational (forms: 1/1000, 0.001, 1e-3)");
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("`{t}` has a zero denominator"));
        }
        return Ok(Rat::new(p, q));
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Rat::from_integer(whole * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(whole, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn parse_positive_rat(s: &str) -> Result<Rat, String> {
    let r = parse_rat(s)?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use densitylab::rat;

    #[test]
    fn counts() {
        assert_eq!(parse_count("100000"), Ok(100_000));
        assert_eq!(parse_count("1e5"), Ok(100_000));
        assert_eq!(parse_count("10^5"), Ok(100_000));
        assert_eq!(parse_count("2^20"), Ok(1 << 20));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("2^64").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("1.5").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("1/1000"), Ok(rat(1, 1000)));
        assert_eq!(parse_rat("0.001"), Ok(rat(1, 1000)));
        assert_eq!(parse_rat("1e-3"), Ok(rat(1, 1000)));
        assert_eq!(parse_rat(".25"), Ok(rat(1, 4)));
        assert_eq!(parse_rat("2.5e1"), Ok(rat(25, 1)));
        assert_eq!(parse_rat("-3/6"), Ok(rat(-1, 2)));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat(".").is_err());
        assert!(parse_positive_rat("0").is_err());
    }
}
