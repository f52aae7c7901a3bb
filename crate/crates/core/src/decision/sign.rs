//! Ultimate sign of an exponential sum `u_n = Σ c(α)·αⁿ`, by dominant-root
//! analysis on residue classes.
//!
//! Substituting `n = P·q + r`, with `P` a multiple of every root-of-unity
//! ratio between bases of equal modulus (and of `α/|α|` where that is a root
//! of unity), leaves each dominant class with at most one positive real base
//! and conjugate pairs of irrational angle. The class is then decided from the
//! real coefficient `c₀` against the total pair weight `T = Σ 2|c_j|`.

use super::simulate::violates;
use super::{Property, ResidueClass, Verdict, Witness};
use crate::algebraic::field::FieldElement;
use crate::algebraic::interval::Interval;
use crate::algebraic::modulus::{modulus_classes_of, ModulusClass, UnityRatios};
use crate::algebraic::roots::RootSet;
use crate::exact::rational::{lcm_u64, sqrt_lower, sqrt_upper, Rational};
use crate::expsum::ExponentialSum;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

/// Periods beyond this are reported as undecided rather than expanded.
const MAX_PERIOD: u64 = 4096;
/// Thresholds up to this are minimized by exact evaluation.
const MINIMIZE_LIMIT: u64 = 20_000;
pub const DEFAULT_GUARD: u64 = 500;

struct BaseInfo {
    rs: Arc<RootSet>,
    classes: Vec<ModulusClass>,
    period: u64,
}

enum ClassOutcome {
    /// Holds for all `q ≥ q0` in the class.
    Yes { q0: u64 },
    No,
    Unknown(String),
}

/// Analyses exponential sums, caching root data per base polynomial.
pub struct SignAnalyzer {
    guard: u64,
    cache: HashMap<Vec<Rational>, Arc<BaseInfo>>,
}

pub fn decide_ultimate_sign(s: &ExponentialSum, prop: Property) -> Verdict {
    SignAnalyzer::new(DEFAULT_GUARD).analyze(s, prop, None)
}

fn root_sign(rs: &RootSet, i: usize) -> Ordering {
    if let Some(q) = rs.rational(i) {
        return q.cmp(&Rational::zero());
    }
    let mut bits = 16;
    loop {
        let z = rs.enclosure(i, bits);
        if z.re.is_positive() {
            return Ordering::Greater;
        }
        if z.re.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Sign of a nonzero real embedded element.
fn real_sign(c: &FieldElement) -> Ordering {
    let mut bits = 16;
    loop {
        let z = c.enclosure(bits);
        if z.re.is_positive() {
            return Ordering::Greater;
        }
        if z.re.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

fn abs_upper(c: &FieldElement, bits: u32) -> Rational {
    sqrt_upper(&c.enclosure(bits).abs_sq().hi, bits)
}

fn abs_interval(c: &FieldElement, bits: u32) -> Interval {
    let sq = c.enclosure(bits).abs_sq();
    let lo = if sq.lo.is_positive() { sqrt_lower(&sq.lo, bits) } else { Rational::zero() };
    Interval::new(lo, sqrt_upper(&sq.hi, bits))
}

fn ln_big(n: &BigInt) -> f64 {
    let b = n.bits();
    if b > 60 {
        let shift = b - 53;
        ((n >> shift as usize).to_f64().unwrap()).ln() + shift as f64 * std::f64::consts::LN_2
    } else {
        n.to_f64().unwrap().ln()
    }
}

fn ln_rational(x: &Rational) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

/// The smallest value `≥ v` with at most `bits` significant bits.
fn ceil_significant(v: &Rational, bits: u64) -> Rational {
    let mag = v.numer().bits() as i64 - v.denom().bits() as i64;
    let shift = bits as i64 - mag;
    let scaled = if shift >= 0 {
        v * Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        v / Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let c = scaled.ceil();
    if shift >= 0 {
        c / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        c * Rational::from_integer(BigInt::one() << (-shift) as usize)
    }
}

/// An upper bound on `r^q`.
fn pow_upper(r: &Rational, q: u64) -> Rational {
    let mut result = Rational::one();
    let mut base = r.clone();
    let mut e = q;
    while e > 0 {
        if e & 1 == 1 {
            result = ceil_significant(&(&result * &base), 64);
        }
        base = ceil_significant(&(&base * &base), 64);
        e >>= 1;
    }
    result
}

/// The least `q ≥ 0` with `r^q < t`, for `0 < r < 1` and `t > 0`.
fn least_exponent(r: &Rational, t: &Rational) -> u64 {
    if t > &Rational::one() {
        return 0;
    }
    let est = (ln_rational(t) / ln_rational(r)).ceil();
    let mut q = if est.is_finite() && est > 3.0 { est as u64 - 3 } else { 0 };
    while pow_upper(r, q) >= *t {
        q += 1;
    }
    while q > 0 && pow_upper(r, q - 1) < *t {
        q -= 1;
    }
    q
}

impl SignAnalyzer {
    pub fn new(guard: u64) -> SignAnalyzer {
        SignAnalyzer { guard, cache: HashMap::new() }
    }

    fn info(&mut self, base: &crate::exact::QPoly) -> Arc<BaseInfo> {
        let key = base.coeffs().to_vec();
        if let Some(info) = self.cache.get(&key) {
            return info.clone();
        }
        let rs = Arc::new(RootSet::new(base));
        let classes = modulus_classes_of(&rs);
        let period = period_of(&rs, &classes);
        let info = Arc::new(BaseInfo { rs, classes, period });
        self.cache.insert(key, info.clone());
        info
    }

    /// Verdict on `u_n` over `n ≥ 1`; `entry` tags witnesses.
    pub fn analyze(&mut self, s: &ExponentialSum, prop: Property, entry: Option<(usize, usize)>) -> Verdict {
        if s.is_zero() {
            return match prop {
                Property::NonNegative => Verdict::Yes { threshold: 1 },
                Property::Positive => Verdict::No { witness: Witness::Index { n: 1, entry, value: Rational::zero() } },
            };
        }
        let period = self.info(s.base()).period;
        if period > MAX_PERIOD {
            return Verdict::Unknown {
                reason: format!("period {period} of the dominant rotations is too large"),
                undecided: vec![ResidueClass { modulus: 1, residue: 0, entry }],
            };
        }
        let outcomes: Vec<ClassOutcome> =
            s.residue_sums(period).iter().map(|sr| self.class_outcome(sr, prop)).collect();

        let no: Vec<u64> = outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, ClassOutcome::No))
            .map(|(r, _)| r as u64)
            .collect();
        if !no.is_empty() {
            return Verdict::No { witness: self.witness(s, period, &no, prop, entry) };
        }
        let mut undecided = Vec::new();
        let mut reason = None;
        let mut cert = 1u64;
        for (r, o) in outcomes.iter().enumerate() {
            match o {
                ClassOutcome::Yes { q0 } => cert = cert.max(period.saturating_mul(*q0).saturating_add(r as u64)),
                ClassOutcome::Unknown(why) => {
                    reason.get_or_insert_with(|| why.clone());
                    undecided.push(ResidueClass { modulus: period, residue: r as u64, entry });
                }
                ClassOutcome::No => unreachable!(),
            }
        }
        if let Some(reason) = reason {
            return Verdict::Unknown { reason, undecided };
        }
        Verdict::Yes { threshold: minimize_threshold(s, cert, prop) }
    }

    /// A violating index within the guard horizon in one of the failing
    /// classes, else the first failing class itself.
    fn witness(
        &self,
        s: &ExponentialSum,
        period: u64,
        classes: &[u64],
        prop: Property,
        entry: Option<(usize, usize)>,
    ) -> Witness {
        for (n, v) in s.sequence().enumerate().skip(1).take(self.guard as usize) {
            let n = n as u64;
            if classes.contains(&(n % period)) && violates(&v, prop) {
                return Witness::Index { n, entry, value: v };
            }
        }
        Witness::Residue { modulus: period, residue: classes[0], entry }
    }

    fn class_outcome(&mut self, sr: &ExponentialSum, prop: Property) -> ClassOutcome {
        if sr.is_zero() {
            return match prop {
                Property::NonNegative => ClassOutcome::Yes { q0: 0 },
                Property::Positive => ClassOutcome::No,
            };
        }
        let info = self.info(sr.base());
        let rs = &info.rs;
        let top = &info.classes[0];
        let coeff = |i: usize| FieldElement::embedded(rs, i, sr.coeff());

        let mut real = None;
        let mut pairs = Vec::new();
        for &i in &top.roots {
            if rs.is_real(i) {
                if root_sign(rs, i) == Ordering::Less {
                    return ClassOutcome::Unknown("negative dominant base after period substitution".into());
                }
                real = Some(i);
            } else if rs.conjugate(i) > i {
                pairs.push(i);
            }
        }

        let margin_lb = if pairs.is_empty() {
            let c = coeff(real.expect("dominant class is nonempty"));
            if real_sign(&c) == Ordering::Less {
                return ClassOutcome::No;
            }
            let mut bits = 16;
            loop {
                let lo = c.enclosure(bits).re.lo;
                if lo.is_positive() {
                    break lo;
                }
                bits *= 2;
            }
        } else {
            // With c₀ ≤ 0 the dominant part is c₀ plus a mean-zero oscillation
            // that is not identically zero, so it is negative infinitely often.
            let c0 = match real.map(coeff) {
                Some(c) if real_sign(&c) == Ordering::Greater => c,
                _ => return ClassOutcome::No,
            };
            let cs: Vec<FieldElement> = pairs.iter().map(|&i| coeff(i)).collect();
            if cs.len() == 1 {
                let a = c0.to_complex().re;
                let b = cs[0].to_complex();
                let lhs = a.mul(&a);
                let rhs = b.re.mul(&b.re).add(&b.im.mul(&b.im)).scale(&Rational::from_integer(4.into()));
                match lhs.cmp(&rhs) {
                    Ordering::Less => return ClassOutcome::No,
                    Ordering::Equal => {
                        return ClassOutcome::Unknown("dominant real term exactly balances the oscillating pair".into())
                    }
                    Ordering::Greater => {}
                }
            }
            let mut bits = 32;
            loop {
                let mut iv = c0.enclosure(bits).re;
                for c in &cs {
                    iv = iv.sub(&abs_interval(c, bits).scale(&Rational::from_integer(2.into())));
                }
                if iv.lo.is_positive() {
                    break iv.lo;
                }
                if iv.hi.is_negative() {
                    return ClassOutcome::Unknown("several oscillating dominant pairs outweigh the real term".into());
                }
                if bits >= 1024 {
                    return ClassOutcome::Unknown("dominant margin could not be separated from zero".into());
                }
                bits *= 2;
            }
        };

        if info.classes.len() == 1 {
            return ClassOutcome::Yes { q0: 0 };
        }
        let tail: Rational = info.classes[1..]
            .iter()
            .flat_map(|c| c.roots.iter())
            .map(|&i| abs_upper(&coeff(i), 32))
            .sum();
        let ratio = modulus_ratio_upper(&info.classes[0], &info.classes[1]);
        ClassOutcome::Yes { q0: least_exponent(&ratio, &(margin_lb / tail)) }
    }
}

/// A rational upper bound below one on `|λ₂| / |λ₁|`.
fn modulus_ratio_upper(top: &ModulusClass, next: &ModulusClass) -> Rational {
    let mut bits = 16;
    loop {
        let lo = top.modulus_squared.refined(bits).lo().clone();
        let hi = next.modulus_squared.refined(bits).hi().clone();
        if hi < lo && lo.is_positive() {
            let r = sqrt_upper(&(&hi / &lo), 64);
            if r < Rational::one() {
                return r;
            }
        }
        bits *= 2;
    }
}

/// `P`: a multiple of every root-of-unity ratio order within each modulus
/// class, with `2d` for a conjugate pair whose ratio has order `d` and `2` for
/// a negative real base.
fn period_of(rs: &RootSet, classes: &[ModulusClass]) -> u64 {
    let mut tester = UnityRatios::new(rs);
    let mut p = 1u64;
    for class in classes {
        for (a, &i) in class.roots.iter().enumerate() {
            let conj = rs.conjugate(i);
            if rs.is_real(i) {
                if root_sign(rs, i) == Ordering::Less {
                    p = lcm_u64(p, 2);
                }
            } else if i < conj {
                if let Some(d) = tester.order(i, conj) {
                    p = lcm_u64(p, 2 * d);
                }
            }
            for &j in &class.roots[a + 1..] {
                if j == conj {
                    continue;
                }
                if let Some(d) = tester.order(i, j) {
                    p = lcm_u64(p, d);
                }
            }
        }
    }
    p
}

/// The least `N ≤ cert` such that the property holds on `[N, cert)`; the
/// analysis already covers `n ≥ cert`.
fn minimize_threshold(s: &ExponentialSum, cert: u64, prop: Property) -> u64 {
    if cert > MINIMIZE_LIMIT {
        return cert;
    }
    let values = s.values(cert as usize);
    (1..cert)
        .rev()
        .find(|&n| violates(&values[n as usize], prop))
        .map_or(1, |n| n + 1)
}
