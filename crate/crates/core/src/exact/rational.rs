//! Rational scalars and their canonical string form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational scalar. `BigRational` keeps itself reduced with a
/// positive denominator after every operation.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p/q"` or `"p"`. Whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rounds `q` down to a multiple of `2^-bits`.
pub fn dyadic_floor(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

/// Rounds `q` up to a multiple of `2^-bits`.
pub fn dyadic_ceil(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

/// A dyadic rational `>= sqrt(q)` within `2^-bits` of it. `q` must be non-negative.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let scaled = (q * Rational::from_integer(scale)).ceil().to_integer();
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    Rational::new(r, BigInt::one() << bits)
}

/// A dyadic rational `<= sqrt(q)` within `2^-bits` of it.
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let scaled = (q * Rational::from_integer(scale)).floor().to_integer();
    Rational::new(scaled.sqrt(), BigInt::one() << bits)
}

/// The non-negative rational square root of `q`, if there is one.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Number of bits needed to write the larger of numerator and denominator.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

/// Euler's totient, used when enumerating candidate root-of-unity orders.
pub fn totient(n: u64) -> u64 {
    let mut n_left = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n_left {
        if n_left % p == 0 {
            while n_left % p == 0 {
                n_left /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n_left > 1 {
        result -= result / n_left;
    }
    result
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// The simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if hi.is_negative() || (hi.is_zero() && lo.is_negative()) {
        return -simplest_between(&-hi, &-lo);
    }
    // Stern-Brocot descent via continued fractions on a non-negative interval.
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if &fl + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    let inv = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inv.recip()
}

/// Serde adapter writing a rational as its canonical string.
pub mod as_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals as strings.
pub mod as_string_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
        assert_eq!(parse_rational(" -3 / 2 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = rat(2);
        let up = sqrt_upper(&two, 20);
        let lo = sqrt_lower(&two, 20);
        assert!(&up * &up >= two);
        assert!(&lo * &lo <= two);
        assert!(&up - &lo <= ratio(1, 1 << 19));
        assert_eq!(sqrt_upper(&rat(9), 4), rat(3));
    }

    #[test]
    fn totients() {
        let t: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(t, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(2, 5)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(-2, 5), &ratio(-3, 10)), ratio(-1, 3));
        assert_eq!(simplest_between(&ratio(7, 3), &ratio(7, 3)), ratio(7, 3));
        assert_eq!(simplest_between(&ratio(-1, 2), &ratio(1, 2)), rat(0));
        assert_eq!(simplest_between(&ratio(9, 4), &ratio(11, 4)), ratio(5, 2));
    }
}
