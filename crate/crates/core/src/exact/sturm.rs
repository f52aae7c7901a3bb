//! Real root isolation by Sturm sequences and dyadic bisection.

use super::poly::QPoly;
use super::rational::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// An isolating interval. Either `lo == hi` (an exact rational root) or
/// `lo < hi` with the polynomial nonzero at both ends and exactly one root
/// strictly between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl RootInterval {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<QPoly>,
}

impl SturmChain {
    pub fn new(p: &QPoly) -> SturmChain {
        let mut chain = vec![scale_abs(p), scale_abs(&p.derivative())];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            chain.push(scale_abs(&-&r));
        }
        chain.pop();
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for q in &self.chain {
            let v = q.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn scale_abs(p: &QPoly) -> QPoly {
    if p.is_zero() {
        return QPoly::zero();
    }
    p.scale(&p.lc().abs().recip())
}

/// A power of two strictly larger than the modulus of every complex root.
pub fn root_bound(p: &QPoly) -> Rational {
    let lc = p.lc().abs();
    let mut m = Rational::zero();
    for c in &p.coeffs()[..p.deg()] {
        let r = c.abs() / &lc;
        if r > m {
            m = r;
        }
    }
    let bound = m + Rational::one();
    let mut b = Rational::one();
    while b <= bound {
        b *= rat(2);
    }
    b
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Isolates the real roots of a squarefree polynomial, in increasing order.
pub fn isolate_squarefree(p: &QPoly) -> Vec<(Rational, Rational)> {
    assert!(!p.is_zero());
    if p.deg() == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(p);
    let b = root_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(tidy(p, &chain, lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Turns a half-open interval `(lo, hi]` holding one root into the canonical
/// form: a point if the root is dyadic-exact, else an open interval with
/// nonzero endpoint values.
fn tidy(p: &QPoly, chain: &SturmChain, mut lo: Rational, mut hi: Rational) -> (Rational, Rational) {
    if p.eval(&hi).is_zero() {
        return (hi.clone(), hi);
    }
    while p.eval(&lo).is_zero() {
        let mid = (&lo + &hi) / rat(2);
        if p.eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if chain.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// One bisection step on a canonical isolating interval of a squarefree `p`.
pub fn bisect(p: &QPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    if lo == hi {
        return (lo.clone(), hi.clone());
    }
    let mid = (lo + hi) / rat(2);
    let sm = sign(&p.eval(&mid));
    if sm == 0 {
        return (mid.clone(), mid);
    }
    if sm == sign(&p.eval(lo)) {
        (mid, hi.clone())
    } else {
        (lo.clone(), mid)
    }
}

/// Bisects until the width is at most `2^-bits`.
pub fn refine_to(p: &QPoly, lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
    let target = Rational::new(BigInt::one(), BigInt::one() << bits);
    let (mut l, mut h) = (lo.clone(), hi.clone());
    while &h - &l > target {
        let (a, b) = bisect(p, &l, &h);
        l = a;
        h = b;
    }
    (l, h)
}

/// Real roots with multiplicities, in increasing order.
pub fn sturm_isolate_real_roots(p: &QPoly) -> Vec<RootInterval> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let parts = p.squarefree_decomposition();
    let sqf = p.squarefree_part();
    isolate_squarefree(&sqf)
        .into_iter()
        .map(|(lo, hi)| {
            let multiplicity = parts
                .iter()
                .position(|f| has_root_in(f, &lo, &hi))
                .map(|i| i + 1)
                .expect("root belongs to one squarefree factor");
            RootInterval { lo, hi, multiplicity }
        })
        .collect()
}

/// Whether the squarefree `f`, having at most one root in the canonical
/// interval, has it there.
pub fn has_root_in(f: &QPoly, lo: &Rational, hi: &Rational) -> bool {
    if lo == hi {
        return f.eval(lo).is_zero();
    }
    let (a, b) = (f.eval(lo), f.eval(hi));
    if a.is_zero() || b.is_zero() {
        return SturmChain::new(f).count(lo, hi) - usize::from(b.is_zero()) > 0;
    }
    sign(&a) != sign(&b)
}

/// Compares a rational with the root held by a canonical isolating interval.
pub fn cmp_rational_with_root(p: &QPoly, lo: &Rational, hi: &Rational, x: &Rational) -> Ordering {
    if lo == hi {
        return x.cmp(lo);
    }
    if x <= lo {
        return Ordering::Less;
    }
    if x >= hi {
        return Ordering::Greater;
    }
    let sx = sign(&p.eval(x));
    if sx == 0 {
        // the only root of p strictly inside the interval is the isolated one
        return Ordering::Equal;
    }
    if sx == sign(&p.eval(lo)) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
