//! Arithmetic in `Q[x]/m(x)` for squarefree `m`, with lazy splitting when a
//! zero divisor turns up, and complex algebraic numbers built on it.

use super::interval::{CBox, Interval};
use super::real::RealAlgebraic;
use super::resultant::{composed_sum, image_poly};
use super::roots::RootSet;
use crate::exact::rational::{rat, Rational};
use crate::exact::QPoly;
use num_traits::{One, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field elements live over different moduli")]
    ModulusMismatch,
    #[error("the zero element has no inverse")]
    ZeroElement,
    #[error("modulus is not squarefree")]
    NotSquarefree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
}

/// A chosen root of the modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub roots: Arc<RootSet>,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct FieldElement {
    modulus: QPoly,
    rep: QPoly,
    embedding: Option<Embedding>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.rep == other.rep
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Inverse {
    Value(FieldElement),
    /// The modulus factors as `m1·m2` with the element zero modulo `m1`.
    Split(QPoly, QPoly),
}

impl FieldElement {
    pub fn new(modulus: &QPoly, rep: &QPoly) -> Result<FieldElement, FieldError> {
        if modulus.deg() == 0 || !modulus.is_squarefree() {
            return Err(FieldError::NotSquarefree);
        }
        let modulus = modulus.monic();
        let rep = rep.rem(&modulus);
        Ok(FieldElement { modulus, rep, embedding: None })
    }

    /// An element of `Q[x]/m` for any nonconstant `m`. Only ring operations
    /// are meaningful when `m` has repeated factors.
    pub fn in_quotient(modulus: &QPoly, rep: &QPoly) -> FieldElement {
        assert!(modulus.deg() > 0, "quotient by a constant");
        let modulus = modulus.monic();
        let rep = rep.rem(&modulus);
        FieldElement { modulus, rep, embedding: None }
    }

    /// The element `rep(α)` for the root `α` of `roots` at `index`.
    pub fn embedded(roots: &Arc<RootSet>, index: usize, rep: &QPoly) -> FieldElement {
        let modulus = roots.poly().clone();
        FieldElement {
            rep: rep.rem(&modulus),
            modulus,
            embedding: Some(Embedding { roots: roots.clone(), index }),
        }
    }

    pub fn generator(modulus: &QPoly) -> Result<FieldElement, FieldError> {
        FieldElement::new(modulus, &QPoly::x())
    }

    pub fn constant(modulus: &QPoly, c: Rational) -> Result<FieldElement, FieldError> {
        FieldElement::new(modulus, &QPoly::constant(c))
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn with_rep(&self, rep: QPoly) -> FieldElement {
        FieldElement {
            modulus: self.modulus.clone(),
            rep: rep.rem(&self.modulus),
            embedding: self.embedding.clone(),
        }
    }

    /// Sum of the conjugates `Σ rep(α)` over all roots of the modulus.
    pub fn trace(&self) -> Rational {
        trace_mod(&self.rep, &self.modulus)
    }

    /// Value of this element at its embedding, as an exact test.
    pub fn is_zero_at_embedding(&self) -> bool {
        let e = self.embedding.as_ref().expect("element has no embedding");
        e.roots.is_root_of(e.index, &self.rep)
    }

    /// A box around the embedded value of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> CBox {
        let e = self.embedding.as_ref().expect("element has no embedding");
        if self.rep.is_constant() {
            return CBox::from_rational(&self.rep.coeff(0));
        }
        let target = Rational::new(1.into(), num_bigint::BigInt::one() << bits);
        let mut work = bits + 8;
        loop {
            let z = e.roots.enclosure(e.index, work);
            let v = CBox::eval_poly(&self.rep, &z, work + 8);
            if v.width() <= target {
                return v;
            }
            work += work / 2 + 8;
        }
    }

    /// The complex number this embedded element stands for.
    pub fn to_complex(&self) -> ComplexAlgebraic {
        let e = self.embedding.as_ref().expect("element has no embedding");
        if self.rep.is_constant() {
            return ComplexAlgebraic::from_rational(self.rep.coeff(0));
        }
        let w = image_poly(&self.rep, &self.modulus).squarefree_part();
        if e.roots.is_real(e.index) {
            let re = RealAlgebraic::select_root(&w, |bits| self.enclosure(bits).re);
            return ComplexAlgebraic { re, im: RealAlgebraic::from_rational(Rational::zero()) };
        }
        ComplexAlgebraic::from_poly_and_enclosure(&w, |bits| self.enclosure(bits))
    }
}

/// `Σ g(α)` over the roots of `m`, from Newton power sums.
pub fn trace_mod(g: &QPoly, m: &QPoly) -> Rational {
    let g = g.rem(m);
    if g.is_zero() {
        return Rational::zero();
    }
    let sums = m.power_sums(g.deg() + 1);
    g.coeffs().iter().zip(&sums).map(|(c, s)| c * s).sum()
}

pub fn field_arith(op: FieldOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    if a.modulus != b.modulus {
        return Err(FieldError::ModulusMismatch);
    }
    let rep = match op {
        FieldOp::Add => &a.rep + &b.rep,
        FieldOp::Sub => &a.rep - &b.rep,
        FieldOp::Mul => &a.rep * &b.rep,
    };
    Ok(a.with_rep(rep))
}

pub fn field_inverse(a: &FieldElement) -> Result<Inverse, FieldError> {
    if a.rep.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let (g, s, _) = a.rep.ext_gcd(&a.modulus);
    if g.is_constant() {
        let s = s.scale(&g.coeff(0).recip());
        return Ok(Inverse::Value(a.with_rep(s)));
    }
    Ok(Inverse::Split(g.clone(), a.modulus.exact_div(&g)))
}

/// Inverse of a nonzero embedded element: splits the modulus as needed and
/// keeps the factor that vanishes at the embedded root.
pub fn embedded_inverse(a: &FieldElement) -> Result<FieldElement, FieldError> {
    let e = a.embedding.as_ref().expect("element has no embedding");
    if a.is_zero_at_embedding() {
        return Err(FieldError::ZeroElement);
    }
    match field_inverse(a)? {
        Inverse::Value(v) => Ok(v),
        Inverse::Split(m1, m2) => {
            let keep = if e.roots.is_root_of(e.index, &m1) { m1 } else { m2 };
            let (sub, idx) = e.roots.restrict(&keep);
            let pos = idx.iter().position(|&i| i == e.index).expect("root lies in kept factor");
            let sub = Arc::new(sub);
            embedded_inverse(&FieldElement::embedded(&sub, pos, &a.rep))
        }
    }
}

/// A complex algebraic number as real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexAlgebraic {
    pub re: RealAlgebraic,
    pub im: RealAlgebraic,
}

impl ComplexAlgebraic {
    pub fn from_rational(q: Rational) -> ComplexAlgebraic {
        ComplexAlgebraic {
            re: RealAlgebraic::from_rational(q),
            im: RealAlgebraic::from_rational(Rational::zero()),
        }
    }

    pub fn from_root(roots: &Arc<RootSet>, index: usize) -> ComplexAlgebraic {
        FieldElement::embedded(roots, index, &QPoly::x()).to_complex()
    }

    /// The root of the squarefree real polynomial `w` singled out by the
    /// shrinking boxes `enclose(bits)`.
    pub fn from_poly_and_enclosure(w: &QPoly, enclose: impl Fn(u32) -> CBox) -> ComplexAlgebraic {
        // 2·Re is a root of the composed sum of w with itself.
        let s = composed_sum(w, w).scale_var(&rat(2)).squarefree_part();
        let re = RealAlgebraic::select_root(&s, |bits| enclose(bits).re);
        // w_i − w_j has the composed difference as minimal multiple; it is
        // even after removing the zero roots, and 2i·Im is among its roots.
        let d = composed_sum(w, &w.scale_var(&rat(-1)));
        let d0 = QPoly::new(d.coeffs()[d.x_valuation()..].to_vec());
        let even: Vec<Rational> = d0.coeffs().iter().step_by(2).cloned().collect();
        debug_assert!(d0.coeffs().iter().skip(1).step_by(2).all(|c| c.is_zero()));
        // E(s) with d0(t) = E(t²); Im satisfies y·E(−4y²) = 0.
        let e = QPoly::new(even);
        let im_poly = &e.compose(&QPoly::new(vec![rat(0), rat(0), rat(-4)])) * &QPoly::x();
        let im = RealAlgebraic::select_root(&im_poly.squarefree_part(), |bits| enclose(bits).im);
        ComplexAlgebraic { re, im }
    }

    pub fn conjugate(&self) -> ComplexAlgebraic {
        ComplexAlgebraic { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn enclosure(&self, bits: u32) -> CBox {
        CBox::new(self.re.enclosure(bits), self.im.enclosure(bits))
    }

    /// `|z|²` as an interval of width at most about `2^-bits`.
    pub fn abs_sq_enclosure(&self, bits: u32) -> Interval {
        let m = self.re.to_f64().abs().max(self.im.to_f64().abs()) as u64 + 2;
        let extra = 64 - m.leading_zeros() + 2;
        self.enclosure(bits + extra).abs_sq()
    }
}

impl std::fmt::Display for ComplexAlgebraic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}) + ({})·i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;
    use std::cmp::Ordering;

    fn fe(m: &[i64], r: &[i64]) -> FieldElement {
        FieldElement::new(&QPoly::from_ints(m), &QPoly::from_ints(r)).unwrap()
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        let x = fe(&[-2, 0, 1], &[0, 1]);
        assert_eq!(field_arith(FieldOp::Mul, &x, &x).unwrap().rep(), &QPoly::from_ints(&[2]));
        assert!(field_arith(FieldOp::Add, &x, &fe(&[-2, 0, 1], &[0, -1])).unwrap().is_zero());
        let m = QPoly::from_ints(&[4, 0, -3, 1]);
        let a = FieldElement::in_quotient(&m, &QPoly::from_ints(&[-2, 1]));
        let b = FieldElement::in_quotient(&m, &QPoly::from_ints(&[1, 1]));
        assert_eq!(field_arith(FieldOp::Mul, &a, &b).unwrap().rep(), &QPoly::from_ints(&[-2, -1, 1]));
        assert_eq!(
            field_arith(FieldOp::Add, &x, &fe(&[1, 0, 1], &[0, 1])),
            Err(FieldError::ModulusMismatch)
        );
    }

    #[test]
    fn inverse_or_split() {
        let x = fe(&[-2, 0, 1], &[0, 1]);
        match field_inverse(&x).unwrap() {
            Inverse::Value(v) => assert_eq!(v.rep(), &QPoly::new(vec![rat(0), ratio(1, 2)])),
            Inverse::Split(..) => panic!("x is a unit"),
        }
        let a = fe(&[-2, -1, 1], &[-2, 1]);
        assert_eq!(
            field_inverse(&a).unwrap(),
            Inverse::Split(QPoly::from_ints(&[-2, 1]), QPoly::from_ints(&[1, 1]))
        );
        let one = fe(&[1, 0, 1], &[1]);
        assert_eq!(field_inverse(&one).unwrap(), Inverse::Value(one.clone()));
        assert_eq!(field_inverse(&fe(&[1, 0, 1], &[])), Err(FieldError::ZeroElement));
    }

    #[test]
    fn trace_of_generator_powers() {
        // roots 1 ± i√11 / 2 of x^2 - x + 3: sum 1, sum of squares 1 - 6 = -5
        let m = QPoly::from_ints(&[3, -1, 1]);
        assert_eq!(trace_mod(&QPoly::x(), &m), rat(1));
        assert_eq!(trace_mod(&QPoly::from_ints(&[0, 0, 1]), &m), rat(-5));
    }

    #[test]
    fn complex_parts_of_roots() {
        let rs = Arc::new(RootSet::new(&QPoly::from_ints(&[3, -1, 1])));
        let z = ComplexAlgebraic::from_root(&rs, 1);
        assert_eq!(z.re.as_rational(), Some(&ratio(1, 2)));
        // Im² = 11/4
        assert_eq!(z.im.mul(&z.im).as_rational(), Some(&ratio(11, 4)));
        assert_eq!(z.im.sign(), Ordering::Greater);
        let zc = ComplexAlgebraic::from_root(&rs, 0);
        assert_eq!(zc, z.conjugate());
    }

    #[test]
    fn embedded_inverse_splits_toward_root() {
        // m = (x - 2)(x^2 + 1), element x - 2 at the root i
        let m = &QPoly::from_ints(&[-2, 1]) * &QPoly::from_ints(&[1, 0, 1]);
        let rs = Arc::new(RootSet::new(&m));
        let i = (0..3).find(|&k| !rs.is_real(k)).unwrap();
        let a = FieldElement::embedded(&rs, i, &QPoly::from_ints(&[-2, 1]));
        let inv = embedded_inverse(&a).unwrap();
        assert_eq!(inv.modulus(), &QPoly::from_ints(&[1, 0, 1]));
        // (i - 2)^-1 = (-2 - i)/5
        assert_eq!(inv.rep(), &QPoly::new(vec![ratio(-2, 5), ratio(-1, 5)]));
    }
}
