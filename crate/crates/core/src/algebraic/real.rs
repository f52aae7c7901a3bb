//! Exact real algebraic numbers.

use super::interval::Interval;
use super::resultant::{composed_product, composed_sum};
use crate::exact::rational::{format_rational, parse_rational, rat, simplest_between, Rational};
use crate::exact::sturm::{bisect, cmp_rational_with_root, has_root_in, isolate_squarefree, refine_to, SturmChain};
use crate::exact::QPoly;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A real root of a squarefree polynomial, held by a canonical isolating
/// interval: either `lo == hi` (the value is that rational) or `lo < hi` with
/// the defining polynomial nonzero at both ends and exactly one root between.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    defining: QPoly,
    lo: Rational,
    hi: Rational,
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl RealAlgebraic {
    pub fn from_rational(q: Rational) -> RealAlgebraic {
        RealAlgebraic {
            defining: QPoly::linear_root(&q),
            lo: q.clone(),
            hi: q,
        }
    }

    /// Builds from a squarefree polynomial and a canonical isolating interval.
    pub fn from_isolating(defining: QPoly, lo: Rational, hi: Rational) -> RealAlgebraic {
        debug_assert!(defining.is_squarefree());
        if lo == hi {
            return RealAlgebraic::from_rational(lo);
        }
        RealAlgebraic {
            defining: defining.monic(),
            lo,
            hi,
        }
    }

    /// All real roots of `p` (any nonzero polynomial), ascending.
    pub fn real_roots(p: &QPoly) -> Vec<RealAlgebraic> {
        let sqf = p.squarefree_part();
        isolate_squarefree(&sqf)
            .into_iter()
            .map(|(lo, hi)| {
                let (lo, hi) = pin_rational_root(&sqf, lo, hi);
                RealAlgebraic::from_isolating(sqf.clone(), lo, hi)
            })
            .collect()
    }

    /// The unique real root of `p` consistent with a sequence of shrinking
    /// enclosures. `enclose(bits)` must contain the wanted value and have
    /// width tending to zero as `bits` grows.
    pub fn select_root(p: &QPoly, enclose: impl Fn(u32) -> Interval) -> RealAlgebraic {
        let mut cands = RealAlgebraic::real_roots(p);
        assert!(!cands.is_empty(), "selection among no real roots");
        let mut bits = 16;
        loop {
            let enc = enclose(bits);
            cands.retain(|c| c.interval().intersects(&enc));
            assert!(!cands.is_empty(), "enclosure misses every root");
            if cands.len() == 1 {
                return cands.pop().unwrap();
            }
            for c in cands.iter_mut() {
                *c = c.refined(bits);
            }
            bits *= 2;
        }
    }

    pub fn defining(&self) -> &QPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.lo == self.hi {
            Some(&self.lo)
        } else {
            None
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    /// The same number with an isolating interval of width at most `2^-bits`.
    pub fn refined(&self, bits: u32) -> RealAlgebraic {
        let (lo, hi) = refine_to(&self.defining, &self.lo, &self.hi, bits);
        RealAlgebraic::from_isolating(self.defining.clone(), lo, hi)
    }

    fn halved(&self) -> RealAlgebraic {
        let (lo, hi) = bisect(&self.defining, &self.lo, &self.hi);
        RealAlgebraic::from_isolating(self.defining.clone(), lo, hi)
    }

    pub fn enclosure(&self, bits: u32) -> Interval {
        self.refined(bits).interval()
    }

    pub fn sign(&self) -> Ordering {
        self.cmp_rational(&Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    /// Compares this number with a rational.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        cmp_rational_with_root(&self.defining, &self.lo, &self.hi, x).reverse()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(60).mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn neg(&self) -> RealAlgebraic {
        RealAlgebraic::from_isolating(
            self.defining.scale_var(&rat(-1)).monic(),
            -&self.hi,
            -&self.lo,
        )
    }

    pub fn add(&self, other: &RealAlgebraic) -> RealAlgebraic {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return RealAlgebraic::from_rational(a + b);
        }
        let p = composed_sum(&self.defining, &other.defining).squarefree_part();
        RealAlgebraic::select_root(&p, |bits| self.enclosure(bits + 1).add(&other.enclosure(bits + 1)))
    }

    pub fn sub(&self, other: &RealAlgebraic) -> RealAlgebraic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RealAlgebraic) -> RealAlgebraic {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return RealAlgebraic::from_rational(a * b);
        }
        if self.is_zero() || other.is_zero() {
            return RealAlgebraic::from_rational(Rational::zero());
        }
        let p = composed_product(&self.defining, &other.defining).squarefree_part();
        RealAlgebraic::select_root(&p, |bits| {
            let extra = 4 + self.magnitude_bits().max(other.magnitude_bits());
            self.enclosure(bits + extra).mul(&other.enclosure(bits + extra))
        })
    }

    pub fn scale(&self, c: &Rational) -> RealAlgebraic {
        if c.is_zero() {
            return RealAlgebraic::from_rational(Rational::zero());
        }
        if let Some(a) = self.as_rational() {
            return RealAlgebraic::from_rational(a * c);
        }
        let p = self.defining.scale_var(&c.recip()).monic();
        let (a, b) = (&self.lo * c, &self.hi * c);
        let (lo, hi) = if c.is_positive() { (a, b) } else { (b, a) };
        RealAlgebraic::from_isolating(p, lo, hi)
    }

    fn magnitude_bits(&self) -> u32 {
        let m = self.lo.abs().max(self.hi.abs()) + rat(1);
        m.to_integer().bits() as u32 + 1
    }
}

/// Narrows a canonical isolating interval of the squarefree `p` to a point
/// when the root is rational. A rational root a/b of the primitive integer
/// form has b | lc, so an interval narrower than 1/lc² holds at most one such
/// candidate, and it is the simplest rational in the interval.
pub fn pin_rational_root(p: &QPoly, lo: Rational, hi: Rational) -> (Rational, Rational) {
    if lo == hi {
        return (lo, hi);
    }
    let ints = p.primitive_integer();
    let lc = ints.last().unwrap().abs();
    let bits = 2 * lc.bits() as u32 + 2;
    let (l, h) = refine_to(p, &lo, &hi, bits);
    if l == h {
        return (l, h);
    }
    let s = simplest_between(&l, &h);
    if s.denom() <= &lc && p.eval(&s).is_zero() {
        return (s.clone(), s);
    }
    (l, h)
}

/// Exact comparison. Numbers with coprime defining polynomials differ, so
/// bisection separates them. Otherwise both may be roots of the common factor
/// `g`; if both are, they are equal exactly when `g` has a root in the overlap
/// of the two intervals (each interval holds at most one root of `g`).
pub fn compare(a: &RealAlgebraic, b: &RealAlgebraic) -> Ordering {
    if let Some(x) = b.as_rational() {
        return a.cmp_rational(x);
    }
    if let Some(x) = a.as_rational() {
        return b.cmp_rational(x).reverse();
    }
    let g = a.defining.gcd(&b.defining);
    if !g.is_constant() && has_root_in(&g, &a.lo, &a.hi) && has_root_in(&g, &b.lo, &b.hi) {
        // g is nonzero at every endpoint, since it divides both defining polynomials
        let lo = a.lo.clone().max(b.lo.clone());
        let hi = a.hi.clone().min(b.hi.clone());
        if lo < hi && SturmChain::new(&g).count(&lo, &hi) >= 1 {
            return Ordering::Equal;
        }
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.hi <= b.lo {
            return Ordering::Less;
        }
        if b.hi <= a.lo {
            return Ordering::Greater;
        }
        if a.as_rational().is_some() || b.as_rational().is_some() {
            return compare(&a, &b);
        }
        a = a.halved();
        b = b.halved();
    }
}

#[derive(Serialize, Deserialize)]
struct RealAlgebraicJson {
    defining: Vec<String>,
    lo: String,
    hi: String,
}

impl Serialize for RealAlgebraic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RealAlgebraicJson {
            defining: self.defining.coeffs().iter().map(format_rational).collect(),
            lo: format_rational(&self.lo),
            hi: format_rational(&self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealAlgebraic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = RealAlgebraicJson::deserialize(d)?;
        let parse = |s: &str| parse_rational(s).map_err(D::Error::custom);
        let coeffs = j.defining.iter().map(|c| parse(c)).collect::<Result<Vec<_>, _>>()?;
        let p = QPoly::new(coeffs);
        let (lo, hi) = (parse(&j.lo)?, parse(&j.hi)?);
        if p.is_zero() || !p.is_squarefree() || lo > hi {
            return Err(D::Error::custom("invalid real algebraic number"));
        }
        if lo == hi {
            if !p.eval(&lo).is_zero() {
                return Err(D::Error::custom("point interval is not a root"));
            }
        } else if p.eval(&lo).is_zero()
            || p.eval(&hi).is_zero()
            || SturmChain::new(&p).count(&lo, &hi) != 1
        {
            return Err(D::Error::custom("interval does not isolate one root"));
        }
        Ok(RealAlgebraic::from_isolating(p, lo, hi))
    }
}

impl std::fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{}", format_rational(q)),
            None => write!(f, "root of {} in ({}, {})", self.defining, format_rational(&self.lo), format_rational(&self.hi)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn sqrt2() -> RealAlgebraic {
        RealAlgebraic::real_roots(&QPoly::from_ints(&[-2, 0, 1])).pop().unwrap()
    }

    #[test]
    fn compare_sqrt_two() {
        assert_eq!(sqrt2().cmp_rational(&ratio(3, 2)), Ordering::Less);
        let other = RealAlgebraic::real_roots(&QPoly::from_ints(&[-4, 0, 0, 0, 1]))
            .into_iter()
            .find(|r| r.sign() == Ordering::Greater)
            .unwrap();
        assert_eq!(compare(&sqrt2(), &other), Ordering::Equal);
        assert_eq!(
            compare(&RealAlgebraic::from_rational(rat(-1)), &RealAlgebraic::from_rational(rat(2))),
            Ordering::Less
        );
    }

    #[test]
    fn arithmetic() {
        let s = sqrt2();
        assert_eq!(s.mul(&s).as_rational(), Some(&rat(2)));
        assert!(s.sub(&s).is_zero());
        let t = s.add(&RealAlgebraic::from_rational(rat(1)));
        assert_eq!(t.cmp_rational(&ratio(12, 5)), Ordering::Greater);
        assert_eq!(t.cmp_rational(&ratio(5, 2)), Ordering::Less);
        assert_eq!(s.scale(&rat(-2)).cmp_rational(&rat(-2)), Ordering::Less);
    }

    #[test]
    fn json_round_trip() {
        let s = sqrt2();
        let text = serde_json::to_string(&s).unwrap();
        let back: RealAlgebraic = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
