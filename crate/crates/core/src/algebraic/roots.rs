//! Certified isolation of all complex roots of a squarefree rational polynomial.
//!
//! Real roots come from Sturm sequences. Non-real roots are approximated by
//! Aberth iteration and then certified with the Gerschgorin-type inclusion
//! discs `|z − z_i| ≤ d·|W_i|` (W_i the Weierstrass corrections): a disc that is
//! disjoint from all others contains exactly one root.

use super::interval::{CBox, Interval};
use super::real::pin_rational_root;
use crate::exact::rational::{bit_size, dyadic_ceil, rat, sqrt_upper, Rational};
use crate::exact::sturm::{has_root_in, isolate_squarefree, refine_to};
use crate::exact::QPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLocation {
    Rational(Rational),
    /// Canonical isolating interval of an irrational real root.
    Real { lo: Rational, hi: Rational },
    /// Disc holding exactly one root, disjoint from the real axis and from
    /// every other root's disc.
    Complex {
        re: Rational,
        im: Rational,
        radius: Rational,
    },
}

#[derive(Clone, Debug)]
pub struct RootSet {
    poly: QPoly,
    roots: Vec<RootLocation>,
    conj: Vec<usize>,
    cache: EnclosureCache,
}

/// Enclosures already computed, keyed by root and precision.
#[derive(Debug, Default)]
struct EnclosureCache(Mutex<HashMap<(usize, u32), CBox>>);

impl Clone for EnclosureCache {
    fn clone(&self) -> Self {
        EnclosureCache(Mutex::new(self.0.lock().unwrap().clone()))
    }
}

/// Complex rational used for approximation and certification.
#[derive(Clone, Debug, PartialEq)]
struct CQ {
    re: Rational,
    im: Rational,
}

impl CQ {
    fn new(re: Rational, im: Rational) -> CQ {
        CQ { re, im }
    }
    fn real(re: Rational) -> CQ {
        CQ::new(re, Rational::zero())
    }
    fn add(&self, o: &CQ) -> CQ {
        CQ::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &CQ) -> CQ {
        CQ::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &CQ) -> CQ {
        CQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn abs_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &CQ) -> Option<CQ> {
        let n = o.abs_sq();
        if n.is_zero() {
            return None;
        }
        Some(CQ::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
        ))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn round(&self, bits: u32) -> CQ {
        CQ::new(round_near(&self.re, bits), round_near(&self.im, bits))
    }
    fn conj(&self) -> CQ {
        CQ::new(self.re.clone(), -&self.im)
    }
}

fn round_near(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

fn eval_cq(p: &QPoly, z: &CQ) -> CQ {
    let mut acc = CQ::real(Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CQ::real(c.clone()));
    }
    acc
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 {
            re: (self.re * o.re + self.im * o.im) / n,
            im: (self.im * o.re - self.re * o.im) / n,
        }
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Floating-point Aberth iteration; returns `None` if it does not settle.
fn aberth_f64(p: &QPoly) -> Option<Vec<C64>> {
    let coeffs: Vec<f64> = p.monic().coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let d = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let radius = bound.min(1e6) * 0.5 + 0.5;
    let mut z: Vec<C64> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            C64 { re: radius * t.cos(), im: radius * t.sin() }
        })
        .collect();
    let eval = |x: C64| -> (C64, C64) {
        let mut v = C64 { re: 0.0, im: 0.0 };
        let mut dv = C64 { re: 0.0, im: 0.0 };
        for c in coeffs.iter().rev() {
            dv = dv.mul(x).add(v);
            v = v.mul(x).add(C64 { re: *c, im: 0.0 });
        }
        (v, dv)
    };
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v.div(dv);
            let mut s = C64 { re: 0.0, im: 0.0 };
            for j in 0..d {
                if j != i {
                    s = s.add(C64 { re: 1.0, im: 0.0 }.div(z[i].sub(z[j])));
                }
            }
            let denom = C64 { re: 1.0, im: 0.0 }.sub(ratio.mul(s));
            let w = ratio.div(denom);
            if !w.finite() {
                return None;
            }
            z[i] = z[i].sub(w);
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    if z.iter().all(|c| c.finite()) {
        Some(z)
    } else {
        None
    }
}

/// One Gauss–Seidel Aberth sweep in exact arithmetic, rounded to `bits`.
fn aberth_step(p: &QPoly, dp: &QPoly, z: &mut [CQ], bits: u32) {
    let d = z.len();
    for i in 0..d {
        let v = eval_cq(p, &z[i]);
        if v.is_zero() {
            continue;
        }
        let Some(ratio) = v.div(&eval_cq(dp, &z[i])) else {
            continue;
        };
        let mut s = CQ::real(Rational::zero());
        for j in 0..d {
            if j != i {
                if let Some(t) = CQ::real(Rational::one()).div(&z[i].sub(&z[j])) {
                    s = s.add(&t);
                }
            }
        }
        let denom = CQ::real(Rational::one()).sub(&ratio.mul(&s));
        if let Some(w) = ratio.div(&denom) {
            z[i] = z[i].sub(&w).round(bits);
        }
    }
}

impl RootSet {
    /// Isolates every root of the squarefree polynomial `p`.
    pub fn new(p: &QPoly) -> RootSet {
        assert!(p.is_squarefree(), "root set of a non-squarefree polynomial");
        let poly = p.monic();
        let d = poly.deg();
        let mut reals: Vec<RootLocation> = isolate_squarefree(&poly)
            .into_iter()
            .map(|(lo, hi)| classify_real_root(&poly, lo, hi))
            .collect();
        let n_complex = d - reals.len();
        let mut complex = if n_complex > 0 {
            isolate_complex(&poly, &reals, n_complex)
        } else {
            Vec::new()
        };
        let mut roots = Vec::with_capacity(d);
        roots.append(&mut reals);
        roots.append(&mut complex);
        // Order by (re, |im|, sign im) of the location centre; conjugates adjacent.
        let key = |r: &RootLocation| -> (Rational, Rational, i8) {
            match r {
                RootLocation::Rational(q) => (q.clone(), Rational::zero(), 0),
                RootLocation::Real { lo, hi } => ((lo + hi) / rat(2), Rational::zero(), 0),
                RootLocation::Complex { re, im, .. } => {
                    (re.clone(), im.abs(), if im.is_negative() { -1 } else { 1 })
                }
            }
        };
        roots.sort_by(|a, b| key(a).cmp(&key(b)));
        let conj = (0..roots.len())
            .map(|i| match &roots[i] {
                RootLocation::Complex { re, im, .. } => roots
                    .iter()
                    .position(|r| {
                        matches!(r, RootLocation::Complex { re: r2, im: i2, .. } if r2 == re && *i2 == -im.clone())
                    })
                    .expect("conjugate disc present"),
                _ => i,
            })
            .collect();
        RootSet { poly, roots, conj, cache: EnclosureCache::default() }
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn location(&self, i: usize) -> &RootLocation {
        &self.roots[i]
    }

    pub fn is_real(&self, i: usize) -> bool {
        !matches!(self.roots[i], RootLocation::Complex { .. })
    }

    pub fn rational(&self, i: usize) -> Option<&Rational> {
        match &self.roots[i] {
            RootLocation::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn all_rational(&self) -> bool {
        self.roots.iter().all(|r| matches!(r, RootLocation::Rational(_)))
    }

    pub fn conjugate(&self, i: usize) -> usize {
        self.conj[i]
    }

    /// A box around root `i` of width at most `2^-bits`.
    pub fn enclosure(&self, i: usize, bits: u32) -> CBox {
        if let Some(b) = self.cache.0.lock().unwrap().get(&(i, bits)) {
            return b.clone();
        }
        let b = self.compute_enclosure(i, bits);
        self.cache.0.lock().unwrap().insert((i, bits), b.clone());
        b
    }

    fn compute_enclosure(&self, i: usize, bits: u32) -> CBox {
        match &self.roots[i] {
            RootLocation::Rational(q) => CBox::from_rational(q),
            RootLocation::Real { lo, hi } => {
                let (l, h) = refine_to(&self.poly, lo, hi, bits);
                CBox::real(Interval::new(l, h))
            }
            RootLocation::Complex { re, im, radius } => {
                refine_complex(&self.poly, &CQ::new(re.clone(), im.clone()), radius, bits)
            }
        }
    }

    /// Whether root `i` is a zero of `f`. Exact.
    pub fn is_root_of(&self, i: usize, f: &QPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let g = f.gcd(&self.poly);
        if g.is_constant() {
            return false;
        }
        match &self.roots[i] {
            RootLocation::Rational(q) => g.eval(q).is_zero(),
            RootLocation::Real { lo, hi } => has_root_in(&g, lo, hi),
            RootLocation::Complex { .. } => {
                let h = self.poly.exact_div(&g);
                let mut bits = 32;
                loop {
                    let z = self.enclosure(i, bits);
                    if !CBox::eval_poly(&g, &z, bits + 16).contains_zero() {
                        return false;
                    }
                    if !CBox::eval_poly(&h, &z, bits + 16).contains_zero() {
                        return true;
                    }
                    bits *= 2;
                }
            }
        }
    }

    /// The roots of the factor `f` of this set's polynomial, with their
    /// indices here. Locations stay certified for the factor.
    pub fn restrict(&self, f: &QPoly) -> (RootSet, Vec<usize>) {
        let f = f.monic();
        let idx: Vec<usize> = (0..self.len()).filter(|&i| self.is_root_of(i, &f)).collect();
        let roots: Vec<RootLocation> = idx.iter().map(|&i| self.roots[i].clone()).collect();
        let conj = idx
            .iter()
            .map(|&i| idx.iter().position(|&j| j == self.conj[i]).expect("factor is real"))
            .collect();
        (RootSet { poly: f, roots, conj, cache: EnclosureCache::default() }, idx)
    }
}

fn classify_real_root(p: &QPoly, lo: Rational, hi: Rational) -> RootLocation {
    let (lo, hi) = pin_rational_root(p, lo, hi);
    if lo == hi {
        RootLocation::Rational(lo)
    } else {
        RootLocation::Real { lo, hi }
    }
}

fn isolate_complex(p: &QPoly, reals: &[RootLocation], n_complex: usize) -> Vec<RootLocation> {
    let d = p.deg();
    let dp = p.derivative();
    let mut approx: Vec<CQ> = match aberth_f64(p) {
        Some(z) => z
            .iter()
            .map(|c| {
                CQ::new(
                    Rational::from_float(c.re).unwrap_or_else(Rational::zero),
                    Rational::from_float(c.im).unwrap_or_else(Rational::zero),
                )
                .round(60)
            })
            .collect(),
        None => {
            let r = crate::exact::sturm::root_bound(p) / rat(2);
            (0..d)
                .map(|k| {
                    // points on a circle at angles k·(2π/d) + 0.4 via rational cos/sin approximations
                    let t = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
                    let c = Rational::from_float(t.cos()).unwrap();
                    let s = Rational::from_float(t.sin()).unwrap();
                    CQ::new(&r * c, &r * s).round(60)
                })
                .collect()
        }
    };
    let mut bits = 64u32;
    for _round in 0..40 {
        if let Some(found) = certify(p, reals, &approx, n_complex, bits) {
            return found;
        }
        bits = (bits * 2).min(1 << 14);
        for _ in 0..4 {
            aberth_step(p, &dp, &mut approx, bits);
        }
    }
    panic!("complex root certification did not converge for {}", p);
}

/// Attempts to certify `n_complex` non-real roots from the approximations.
fn certify(
    p: &QPoly,
    reals: &[RootLocation],
    approx: &[CQ],
    n_complex: usize,
    bits: u32,
) -> Option<Vec<RootLocation>> {
    let d = p.deg();
    // Take the approximations farthest from the real axis as the non-real ones.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| approx[b].im.abs().cmp(&approx[a].im.abs()));
    let mut uppers: Vec<CQ> = order[..n_complex]
        .iter()
        .map(|&i| approx[i].clone())
        .filter(|z| z.im.is_positive())
        .collect();
    if uppers.len() * 2 != n_complex {
        return None;
    }
    uppers.sort_by(|a, b| (&a.re, &a.im).cmp(&(&b.re, &b.im)));
    let mut centres: Vec<CQ> = Vec::with_capacity(d);
    for r in reals {
        match r {
            RootLocation::Rational(q) => centres.push(CQ::real(q.clone())),
            RootLocation::Real { lo, hi } => {
                let (l, h) = refine_to(p, lo, hi, bits.min(256));
                centres.push(CQ::real((l + h) / rat(2)));
            }
            RootLocation::Complex { .. } => unreachable!(),
        }
    }
    let first_complex = centres.len();
    for z in &uppers {
        centres.push(z.conj());
        centres.push(z.clone());
    }
    // Inclusion radii d·|W_i|, W_i = p(z_i) / Π_{j≠i} (z_i − z_j), p monic.
    let dd = rat(d as i64);
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let mut prod = CQ::real(Rational::one());
        for j in 0..d {
            if i != j {
                let diff = centres[i].sub(&centres[j]);
                if diff.is_zero() {
                    return None;
                }
                prod = prod.mul(&diff);
            }
        }
        let w_sq = eval_cq(p, &centres[i]).abs_sq() / prod.abs_sq();
        let r = sqrt_upper(&(w_sq * &dd * &dd), bits + 8);
        radii.push(dyadic_ceil(&r, bits + 8));
    }
    for i in first_complex..d {
        if radii[i] >= centres[i].im.abs() {
            return None;
        }
        for j in 0..d {
            if i == j {
                continue;
            }
            let gap_sq = centres[i].sub(&centres[j]).abs_sq();
            let reach = &radii[i] + &radii[j];
            if gap_sq <= &reach * &reach {
                return None;
            }
        }
    }
    Some(
        (first_complex..d)
            .map(|i| RootLocation::Complex {
                re: centres[i].re.clone(),
                im: centres[i].im.clone(),
                radius: radii[i].clone(),
            })
            .collect(),
    )
}

/// Newton refinement inside a certified disc. Uses the fact that some root
/// lies within `d·|p(z)/p'(z)|` of any `z`; when that disc sits inside the
/// isolating disc the root is the isolated one.
fn refine_complex(p: &QPoly, centre: &CQ, radius: &Rational, bits: u32) -> CBox {
    let d = rat(p.deg() as i64);
    let dp = p.derivative();
    let target = Rational::new(BigInt::one(), BigInt::one() << bits);
    let mut z = centre.clone();
    let mut work = bits.max(32) + 16;
    let mut best: Option<(CQ, Rational)> = None;
    for _ in 0..200 {
        let v = eval_cq(p, &z);
        if v.is_zero() {
            return CBox::point(z.re, z.im);
        }
        let dv = eval_cq(&dp, &z);
        if let Some(step) = v.div(&dv) {
            let r = dyadic_ceil(&sqrt_upper(&(step.abs_sq() * &d * &d), work), work);
            let slack = radius - &r;
            if !slack.is_negative() && z.sub(centre).abs_sq() <= &slack * &slack {
                if r <= target {
                    return CBox::disc_hull(&z.re, &z.im, &r);
                }
                if best.as_ref().map_or(true, |(_, br)| r < *br) {
                    best = Some((z.clone(), r.clone()));
                }
            }
            z = z.sub(&step).round(work);
            if bit_size(&z.re).max(bit_size(&z.im)) > (work as u64) * 4 {
                z = z.round(work);
            }
        } else {
            z = z.add(&CQ::new(target.clone(), target.clone()));
        }
        work = (work + work / 2).min(bits * 2 + 64);
    }
    // Fall back to the best certified disc seen (still a valid enclosure).
    match best {
        Some((z, r)) => CBox::disc_hull(&z.re, &z.im, &r),
        None => CBox::disc_hull(&centre.re, &centre.im, radius),
    }
}
