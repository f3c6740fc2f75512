//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. This module adds the parsing,
//! string serialization and small numeric helpers the rest of the crate
//! needs.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `n / d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn sign(q: &Rational) -> i8 {
    match q.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Formats as `"p/q"`, omitting `/q` when `q == 1`.
pub fn to_string(q: &Rational) -> String {
    q.to_string()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        if s.contains('/') {
            return Err(format!("malformed rational {s:?}"));
        }
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|e| format!("malformed rational {s:?}: {e}"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let q = Rational::from_str(s).map_err(|e| format!("malformed rational {s:?}: {e}"))?;
    Ok(q)
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down both sides by the same power of two
            let shift = q.denom().bits().max(q.numer().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn ceil_to_u64(q: &Rational) -> u64 {
    let c = q.ceil();
    if c.is_negative() {
        0
    } else {
        c.to_integer().to_u64().unwrap_or(u64::MAX)
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The fraction with the smallest denominator in the open interval `(lo, hi)`.
///
/// Requires `lo < hi`. Uses the continued-fraction walk of the Stern–Brocot tree.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &(fl.clone() + Rational::one()) < hi {
        // an integer lies strictly inside
        return fl + Rational::one();
    }
    // both in [fl, fl + 1]
    if &fl == lo {
        // lo is an integer: (lo, hi) with hi <= lo + 1
        let rest = simplest_above(&(hi - &fl));
        return fl + rest;
    }
    let a = lo - &fl;
    let b = hi - &fl;
    // 0 < a < b <= 1; recurse on reciprocals
    let inv = simplest_between(&(Rational::one() / b), &(Rational::one() / a));
    fl + Rational::one() / inv
}

// simplest fraction in (0, h) for 0 < h <= 1
fn simplest_above(h: &Rational) -> Rational {
    // 1/n with n the smallest integer such that 1/n < h
    let n = (Rational::one() / h).floor() + Rational::one();
    Rational::one() / n
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Serde adapter: a `Rational` as a `"p/q"` string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts either a string or a JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Str(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RawRational::Str(s) => super::parse(&s),
                RawRational::Int(i) => Ok(super::int(i)),
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<super::serde_str::RawRational> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse("0.5").unwrap(), rat(1, 2));
        assert!(parse("1/0x").is_err());
        assert_eq!(to_string(&rat(4, 2)), "2");
        assert_eq!(to_string(&rat(-3, 9)), "-1/3");
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(7, 5), &rat(3, 2)), rat(10, 7));
        assert_eq!(simplest_between(&rat(-3, 2), &rat(-7, 5)), rat(-10, 7));
        assert_eq!(simplest_between(&int(1), &rat(3, 2)), rat(4, 3));
        assert_eq!(simplest_between(&int(2), &int(5)), int(3));
        let r = simplest_between(&rat(141, 100), &rat(142, 100));
        assert!(r > rat(141, 100) && r < rat(142, 100));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(10, 0), BigInt::from(1));
    }
}
