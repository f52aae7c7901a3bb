//! Grouping roots by absolute value, and deciding when the quotient of two
//! roots is a root of unity.

use super::interval::{CBox, Interval};
use super::real::RealAlgebraic;
use super::resultant::{composed_product, composed_quotient};
use super::roots::RootSet;
use crate::exact::rational::{rat, totient, Rational};
use crate::exact::QPoly;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Roots sharing one value of `|λ|²`.
#[derive(Clone, Debug)]
pub struct ModulusClass {
    pub modulus_squared: RealAlgebraic,
    pub roots: Vec<usize>,
}

/// Classes of the roots of the squarefree `p`, indexed as in `RootSet::new(p)`,
/// by strictly decreasing modulus.
pub fn modulus_classes(p: &QPoly) -> Vec<ModulusClass> {
    modulus_classes_of(&RootSet::new(p))
}

pub fn modulus_classes_of(rs: &RootSet) -> Vec<ModulusClass> {
    let zero_root = (0..rs.len()).find(|&i| rs.rational(i).map_or(false, |q| q.is_zero()));
    let nonzero: Vec<usize> = (0..rs.len()).filter(|&i| Some(i) != zero_root).collect();
    let mut classes = if nonzero.iter().all(|&i| rs.rational(i).is_some()) {
        rational_classes(rs, &nonzero)
    } else {
        algebraic_classes(rs, &nonzero)
    };
    if let Some(z) = zero_root {
        classes.push(ModulusClass {
            modulus_squared: RealAlgebraic::from_rational(Rational::zero()),
            roots: vec![z],
        });
    }
    classes
}

fn rational_classes(rs: &RootSet, idx: &[usize]) -> Vec<ModulusClass> {
    let mut by_sq: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for &i in idx {
        let q = rs.rational(i).unwrap();
        by_sq.entry(q * q).or_default().push(i);
    }
    by_sq
        .into_iter()
        .rev()
        .map(|(sq, roots)| ModulusClass { modulus_squared: RealAlgebraic::from_rational(sq), roots })
        .collect()
}

fn algebraic_classes(rs: &RootSet, idx: &[usize]) -> Vec<ModulusClass> {
    let p = strip_zero_root(rs.poly());
    // Every |λ|² = λ·conj(λ) is a root of the composed product of p with itself.
    let q = composed_product(&p, &p).squarefree_part();
    let cands: Vec<RealAlgebraic> = RealAlgebraic::real_roots(&q)
        .into_iter()
        .filter(|r| r.sign().is_gt())
        .collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in idx {
        let k = locate(&cands, |bits| abs_sq_enclosure(rs, i, bits));
        groups.entry(k).or_default().push(i);
    }
    groups
        .into_iter()
        .rev()
        .map(|(k, roots)| ModulusClass { modulus_squared: cands[k].clone(), roots })
        .collect()
}

/// Index of the unique candidate consistent with the shrinking enclosures.
fn locate(cands: &[RealAlgebraic], enclose: impl Fn(u32) -> Interval) -> usize {
    let mut live: Vec<(usize, RealAlgebraic)> = cands.iter().cloned().enumerate().collect();
    let mut bits = 16;
    loop {
        let enc = enclose(bits);
        live.retain(|(_, c)| c.interval().intersects(&enc));
        assert!(!live.is_empty(), "enclosure misses every candidate");
        if live.len() == 1 {
            return live[0].0;
        }
        for (_, c) in live.iter_mut() {
            *c = c.refined(bits);
        }
        bits *= 2;
    }
}

fn strip_zero_root(p: &QPoly) -> QPoly {
    QPoly::new(p.coeffs()[p.x_valuation()..].to_vec())
}

/// Enclosure of `|λ_i|²` with width roughly `2^-bits`.
pub fn abs_sq_enclosure(rs: &RootSet, i: usize, bits: u32) -> Interval {
    let z = rs.enclosure(i, 8);
    let mag = z.abs_sq().hi.ceil().to_integer().bits() as u32;
    rs.enclosure(i, bits + mag + 4).abs_sq()
}

/// Enclosure of `λ_i / λ_j`.
fn ratio_enclosure(rs: &RootSet, i: usize, j: usize, bits: u32) -> CBox {
    let mut work = bits + 8;
    loop {
        let (a, b) = (rs.enclosure(i, work), rs.enclosure(j, work));
        if let Some(r) = a.div(&b) {
            return r;
        }
        work *= 2;
    }
}

/// The cyclotomic polynomial `Φ_n`.
pub fn cyclotomic(n: u64) -> QPoly {
    assert!(n >= 1);
    // Φ_n = Π_{d | n} (x^d − 1)^μ(n/d)
    let mut num = QPoly::one();
    let mut den = QPoly::one();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let f = &QPoly::monomial(Rational::one(), d as usize) - &QPoly::one();
        match mobius(n / d) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    num.exact_div(&den)
}

/// Dense polynomials over `F_p`, low degree first, for cheap gcd filtering.
mod modp {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    const P: u64 = 2_147_483_647;

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce(c: &[BigInt]) -> Vec<u64> {
        let p = BigInt::from(P);
        trim(c.iter().map(|x| (((x % &p) + &p) % &p).to_u64().unwrap()).collect())
    }

    /// Degree, with the zero polynomial reported as nonconstant.
    pub fn degree(a: &[u64]) -> usize {
        if a.is_empty() {
            usize::MAX
        } else {
            a.len() - 1
        }
    }

    fn pow(mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        r
    }

    fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
        let inv = pow(*b.last().unwrap(), P - 2);
        while a.len() >= b.len() {
            let f = a.last().unwrap() * inv % P;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P - f * c % P) % P;
            }
            a = trim(a);
        }
        a
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
        while !b.is_empty() {
            let r = rem(a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// `Φ_n` mod p, by multiplying and dividing by `x^d − 1` in place.
    pub fn cyclotomic(n: u64) -> Vec<u64> {
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let mut a = vec![1u64];
        for &d in &divisors {
            if super::mobius(n / d) == 1 {
                let d = d as usize;
                let mut out = vec![0; a.len() + d];
                for (i, &c) in a.iter().enumerate() {
                    out[i + d] = (out[i + d] + c) % P;
                    out[i] = (out[i] + P - c) % P;
                }
                a = out;
            }
        }
        for &d in &divisors {
            if super::mobius(n / d) == -1 {
                let d = d as usize;
                let top = a.len() - 1;
                let mut q = vec![0u64; top + 1 - d];
                for i in (d..=top).rev() {
                    let above = if i < q.len() { q[i] } else { 0 };
                    q[i - d] = (a[i] + above) % P;
                }
                a = q;
            }
        }
        a
    }
}

fn mobius(mut n: u64) -> i8 {
    let mut result = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// If `λ_i / λ_j` is a root of unity, its multiplicative order.
pub fn ratio_root_of_unity(rs: &RootSet, i: usize, j: usize) -> Option<u64> {
    UnityRatios::new(rs).order(i, j)
}

/// Root-of-unity tests for many pairs of roots of one polynomial, sharing the
/// quotient polynomial and its cyclotomic factors.
pub struct UnityRatios<'a> {
    rs: &'a RootSet,
    /// `(n, g, h)` with `g = gcd(rr, Φ_n)` nonconstant and `h = rr / g`.
    factors: Option<Vec<(u64, QPoly, QPoly)>>,
}

impl<'a> UnityRatios<'a> {
    pub fn new(rs: &'a RootSet) -> UnityRatios<'a> {
        UnityRatios { rs, factors: None }
    }

    fn factors(&mut self) -> &[(u64, QPoly, QPoly)] {
        let rs = self.rs;
        self.factors.get_or_insert_with(|| {
            let p = strip_zero_root(rs.poly());
            let rr = composed_quotient(&p, &p).squarefree_part();
            let deg = rr.deg() as u64;
            let mut out = Vec::new();
            // φ(n) ≥ √(n/2), so no n beyond 2·deg² has φ(n) ≤ deg.
            let rr_mod = modp::reduce(&rr.primitive_integer());
            for n in 1..=(2 * deg * deg + 2) {
                if totient(n) > deg {
                    continue;
                }
                // a common factor is a monic integer divisor of Φ_n, so it survives mod p
                if modp::degree(&modp::gcd(rr_mod.clone(), modp::cyclotomic(n))) == 0 {
                    continue;
                }
                let g = rr.gcd(&cyclotomic(n));
                if !g.is_constant() {
                    let h = rr.exact_div(&g);
                    out.push((n, g, h));
                }
            }
            out
        })
    }

    pub fn order(&mut self, i: usize, j: usize) -> Option<u64> {
        let rs = self.rs;
        if let (Some(a), Some(b)) = (rs.rational(i), rs.rational(j)) {
            if a.is_zero() || b.is_zero() {
                return None;
            }
            let r = a / b;
            return if r.is_one() {
                Some(1)
            } else if r == rat(-1) {
                Some(2)
            } else {
                None
            };
        }
        if rs.rational(i).map_or(false, |q| q.is_zero()) || rs.rational(j).map_or(false, |q| q.is_zero()) {
            return None;
        }
        // rigorous filters: |ratio|² must admit 1, and so must ratioⁿ
        let z = ratio_enclosure(rs, i, j, 32);
        if !z.abs_sq().contains(&Rational::one()) {
            return None;
        }
        let one = CBox::from_rational(&Rational::one());
        for (n, g, h) in self.factors() {
            if !z.pow(*n, 40).intersects(&one) {
                continue;
            }
            if ratio_is_root_of(rs, i, j, g, h) {
                return Some(*n);
            }
        }
        None
    }
}

/// Whether the ratio, a root of `g·h` with `g`, `h` coprime, is a root of `g`.
fn ratio_is_root_of(rs: &RootSet, i: usize, j: usize, g: &QPoly, h: &QPoly) -> bool {
    let mut bits = 32;
    loop {
        let z = ratio_enclosure(rs, i, j, bits);
        if !CBox::eval_poly(g, &z, bits + 16).contains_zero() {
            return false;
        }
        if !CBox::eval_poly(h, &z, bits + 16).contains_zero() {
            return true;
        }
        bits *= 2;
    }
}
