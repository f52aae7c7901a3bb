//! Dense univariate polynomials over the rationals.

use super::rational::{format_rational, rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients are stored lowest degree first with no trailing zeros,
/// so the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> QPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> QPoly {
        QPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> QPoly {
        QPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> QPoly {
        QPoly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> QPoly {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        QPoly::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> QPoly {
        QPoly::new(vec![-r.clone(), Rational::one()])
    }

    /// Monic polynomial with the given roots (with repetition).
    pub fn from_roots(roots: &[Rational]) -> QPoly {
        roots
            .iter()
            .fold(QPoly::one(), |acc, r| &acc * &QPoly::linear_root(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial treated as degree 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let lc = self.lc();
        self.scale(&lc.recip())
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> QPoly {
        let mut result = QPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(q(x))`.
    pub fn compose(&self, q: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &QPoly::constant(c.clone());
        }
        acc
    }

    /// `self(x^t)`.
    pub fn substitute_power(&self, t: usize) -> QPoly {
        assert!(t >= 1);
        let mut coeffs = vec![Rational::zero(); self.deg() * t + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * t] = c.clone();
        }
        QPoly::new(coeffs)
    }

    /// `self(c·x)`.
    pub fn scale_var(&self, c: &Rational) -> QPoly {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        QPoly::new(out)
    }

    /// `x^deg · self(1/x)`: its roots are the reciprocals of the nonzero roots.
    pub fn reverse(&self) -> QPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        QPoly::new(c)
    }

    /// Largest power of `x` dividing `self`.
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (QPoly::zero(), self.clone());
        }
        let inv_lc = d.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.deg() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics when `d` does not divide `self`.
    pub fn exact_div(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = primitive_scale(&r);
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s·self + t·other` and `g` monic.
    pub fn ext_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Monic lcm. Either argument zero gives zero.
    pub fn lcm(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let g = self.gcd(other);
        (&self.exact_div(&g) * other).monic()
    }

    /// `p / gcd(p, p')`, monic. Panics on the zero polynomial.
    pub fn squarefree_part(&self) -> QPoly {
        assert!(!self.is_zero(), "squarefree part of the zero polynomial");
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Yun's algorithm: monic `f_1, …, f_m`, pairwise coprime and squarefree,
    /// with `self = lc · Π f_i^i`. Trailing constant factors are dropped.
    pub fn squarefree_decomposition(&self) -> Vec<QPoly> {
        assert!(!self.is_zero());
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let mut c = fp.exact_div(&a0);
        let mut d = &c - &b.derivative();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.exact_div(&a);
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a);
            d = &c - &b.derivative();
        }
        while out.last().map_or(false, |p| p.is_constant()) {
            out.pop();
        }
        out
    }

    /// Integer coefficients with content one and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }

    /// Resultant over the rationals, via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &QPoly) -> Rational {
        if self.is_zero() || other.is_zero() {
            return Rational::zero();
        }
        let (m, n) = (self.deg(), other.deg());
        if n == 0 {
            return other.lc().pow(m as i32);
        }
        if m == 0 {
            return self.lc().pow(n as i32);
        }
        let r = self.rem(other);
        if r.is_zero() {
            return Rational::zero();
        }
        let p = r.deg();
        let sign = if (m * n) % 2 == 1 { -Rational::one() } else { Rational::one() };
        sign * other.lc().pow((m - p) as i32) * other.resultant(&r)
    }

    /// Newton power sums `Σ α^j` over the roots of `self` (with multiplicity), `j < count`.
    pub fn power_sums(&self, count: usize) -> Vec<Rational> {
        let f = self.monic();
        let d = f.deg();
        // e_i from the monic coefficients: f = x^d + c_{d-1} x^{d-1} + …
        let c = |i: usize| f.coeff(d - i);
        let mut p = Vec::with_capacity(count);
        for j in 0..count {
            if j == 0 {
                p.push(rat(d as i64));
                continue;
            }
            let mut s = Rational::zero();
            for i in 1..=(j - 1).min(d) {
                s -= c(i) * &p[j - i];
            }
            if j <= d {
                s -= rat(j as i64) * c(j);
            }
            p.push(s);
        }
        p
    }
}

/// Divides by the absolute leading coefficient; keeps remainder sequences small.
fn primitive_scale(p: &QPoly) -> QPoly {
    if p.is_zero() {
        return QPoly::zero();
    }
    p.scale(&p.lc().abs().recip())
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn gcd_lcm_squarefree() {
        let a = QPoly::from_roots(&[rat(2), rat(2), rat(-1)]);
        let b = QPoly::from_roots(&[rat(2), rat(3)]);
        assert_eq!(a.gcd(&b), p(&[-2, 1]));
        assert_eq!(a.squarefree_part(), QPoly::from_roots(&[rat(2), rat(-1)]));
        let c = p(&[-2, 0, 1]);
        let d = p(&[-1, 1]);
        assert_eq!(c.lcm(&d), &c * &d);
    }

    #[test]
    fn yun_decomposition() {
        let a = QPoly::from_roots(&[rat(2), rat(2), rat(-1), rat(5), rat(5), rat(5)]);
        let parts = a.squarefree_decomposition();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], p(&[1, 1]));
        assert_eq!(parts[1], p(&[-2, 1]));
        assert_eq!(parts[2], p(&[-5, 1]));
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -1, 4, 1, -5, 9]);
        let b = p(&[2, 0, 7]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), QPoly::one());
    }

    #[test]
    fn resultant_matches_root_products() {
        // Res(f, g) = lc(f)^deg g · Π g(α) over roots α of f.
        let f = QPoly::from_roots(&[rat(1), rat(2)]);
        let g = p(&[3, 0, 1]);
        let expected = g.eval(&rat(1)) * g.eval(&rat(2));
        assert_eq!(f.resultant(&g), expected);
        assert_eq!(f.resultant(&QPoly::from_roots(&[rat(2)])), rat(0));
    }

    #[test]
    fn power_sums_of_roots() {
        let f = QPoly::from_roots(&[rat(2), rat(-1), ratio(1, 2)]);
        let ps = f.power_sums(7);
        for (j, s) in ps.iter().enumerate() {
            let e = j as i32;
            let direct = rat(2).pow(e) + rat(-1).pow(e) + ratio(1, 2).pow(e);
            assert_eq!(*s, direct, "power sum {}", j);
        }
    }

    #[test]
    fn display_form() {
        assert_eq!(p(&[4, 0, -3, 1]).to_string(), "x^3 - 3*x^2 + 4");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }
}
