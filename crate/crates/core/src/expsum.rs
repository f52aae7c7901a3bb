//! Exponential sums `u_n = Σ_α c(α)·α^n` over the roots `α` of a squarefree
//! rational polynomial, held in trace form: a base polynomial `L` and a
//! coefficient `c ∈ Q[y]/L`, so that `u_n = Tr(c·y^n)`. Conjugate closure
//! and realness are automatic.

use crate::algebraic::field::{trace_mod, ComplexAlgebraic, FieldElement};
use crate::algebraic::resultant::image_poly;
use crate::algebraic::roots::RootSet;
use crate::exact::rational::Rational;
use crate::exact::QPoly;
use crate::lrs::Lrs;
use num_traits::Zero;
use std::collections::VecDeque;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialSum {
    base: QPoly,
    coeff: QPoly,
}

fn mod_inverse(a: &QPoly, m: &QPoly) -> QPoly {
    let (g, s, _) = a.ext_gcd(m);
    assert!(g.is_constant(), "inverse of a zero divisor");
    s.scale(&g.coeff(0).recip()).rem(m)
}

impl ExponentialSum {
    pub fn zero() -> ExponentialSum {
        ExponentialSum { base: QPoly::one(), coeff: QPoly::zero() }
    }

    /// `Σ c(α) α^n` over the roots of the squarefree `base`. Roots at zero and
    /// roots where `c` vanishes are dropped, which leaves the values for
    /// `n ≥ 1` unchanged.
    pub fn from_trace_form(base: &QPoly, coeff: &QPoly) -> ExponentialSum {
        assert!(base.is_squarefree(), "exponential sum over a repeated root");
        let mut l = base.monic();
        if l.coeff(0).is_zero() {
            l = l.exact_div(&QPoly::x());
        }
        if l.deg() == 0 {
            return ExponentialSum::zero();
        }
        let c = coeff.rem(&l);
        // roots where c vanishes are the roots of gcd(c, l)
        let g = c.gcd(&l);
        let l = if c.is_zero() { QPoly::one() } else { l.exact_div(&g) };
        if l.deg() == 0 {
            return ExponentialSum::zero();
        }
        let c = c.rem(&l);
        ExponentialSum { base: l, coeff: c }
    }

    /// `Σ c_i·b_i^n` for rational pairs `(c_i, b_i)`.
    pub fn from_rational_terms(terms: &[(Rational, Rational)]) -> ExponentialSum {
        terms.iter().fold(ExponentialSum::zero(), |acc, (c, b)| {
            acc.add(&ExponentialSum::from_trace_form(&QPoly::linear_root(b), &QPoly::constant(c.clone())))
        })
    }

    pub fn base(&self) -> &QPoly {
        &self.base
    }

    pub fn coeff(&self) -> &QPoly {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.base.deg() == 0
    }

    /// Number of distinct bases.
    pub fn len(&self) -> usize {
        self.base.deg()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn scale(&self, w: &Rational) -> ExponentialSum {
        if w.is_zero() {
            return ExponentialSum::zero();
        }
        ExponentialSum { base: self.base.clone(), coeff: self.coeff.scale(w) }
    }

    /// The coefficient lifted to `Q[y]/big` for a multiple `big` of the base:
    /// equal to `c` at the base's roots and zero at the other roots.
    fn lift(&self, big: &QPoly) -> QPoly {
        let h = big.exact_div(&self.base);
        let hinv = mod_inverse(&h.rem(&self.base), &self.base);
        (&(&self.coeff * &hinv).rem(&self.base) * &h).rem(big)
    }

    pub fn add(&self, other: &ExponentialSum) -> ExponentialSum {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let l = self.base.lcm(&other.base);
        let c = &self.lift(&l) + &other.lift(&l);
        ExponentialSum::from_trace_form(&l, &c)
    }

    /// `u_0, …, u_{count−1}` (with zero bases already dropped, `u_0` is the
    /// formal value `Σ c(α)`).
    pub fn values(&self, count: usize) -> Vec<Rational> {
        self.sequence().take(count).collect()
    }

    /// `u_0, u_1, …` lazily: the first `d` from traces, then the recurrence
    /// given by the base.
    pub fn sequence(&self) -> Terms {
        if self.is_zero() {
            return Terms { m: QPoly::x(), window: VecDeque::new(), pending: VecDeque::new() };
        }
        let m = self.base.monic();
        let d = m.deg();
        let sums = m.power_sums(d);
        let mut pending = VecDeque::with_capacity(d);
        let mut cur = self.coeff.rem(&m);
        let y = QPoly::x();
        for _ in 0..d {
            pending.push_back(cur.coeffs().iter().zip(&sums).map(|(c, s)| c * s).sum());
            cur = (&cur * &y).rem(&m);
        }
        Terms { m, window: VecDeque::with_capacity(d), pending }
    }

    /// `u_n`, by modular exponentiation.
    pub fn eval(&self, n: u64) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        trace_mod(&(&self.power_of_generator(n) * &self.coeff), &self.base)
    }

    /// The sum `q ↦ u_{P·q + r}`, whose bases are the distinct `α^P`.
    pub fn substitute(&self, period: u64, residue: u64) -> ExponentialSum {
        if self.is_zero() || period == 1 && residue == 0 {
            return self.clone();
        }
        let yp = self.power_of_generator(period);
        let new_base = image_poly(&yp, &self.base).squarefree_part();
        let d = new_base.deg();
        let values: Vec<Rational> = (0..d as u64).map(|i| self.eval(period * i + residue)).collect();
        ExponentialSum::interpolate(&new_base, &values)
    }

    /// `q ↦ u_{P·q + r}` for every residue `r < P`, sharing one base.
    pub fn residue_sums(&self, period: u64) -> Vec<ExponentialSum> {
        if self.is_zero() {
            return vec![ExponentialSum::zero(); period as usize];
        }
        if period == 1 {
            return vec![self.clone()];
        }
        let yp = self.power_of_generator(period);
        let new_base = image_poly(&yp, &self.base).squarefree_part();
        let d = new_base.deg();
        let values = self.values(period as usize * d);
        (0..period as usize)
            .map(|r| {
                let v: Vec<Rational> = (0..d).map(|i| values[period as usize * i + r].clone()).collect();
                ExponentialSum::interpolate(&new_base, &v)
            })
            .collect()
    }

    fn power_of_generator(&self, e: u64) -> QPoly {
        let mut result = QPoly::one();
        let mut b = QPoly::x().rem(&self.base);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &b).rem(&self.base);
            }
            b = (&b * &b).rem(&self.base);
            e >>= 1;
        }
        result
    }

    /// The sum agreeing with a recurrence of squarefree characteristic
    /// polynomial for all `n ≥ 1` (and at `n = 0` too when `a_0 ≠ 0`).
    pub fn from_lrs(lrs: &Lrs) -> Option<ExponentialSum> {
        let p = lrs.char_poly();
        if !p.is_squarefree() {
            return None;
        }
        Some(ExponentialSum::interpolate(&p, lrs.initial()))
    }

    /// The sum over the roots of the squarefree `base` whose first `deg base`
    /// values are `values`. Uses `c(z)·L'(z) = Σ_i h_i(z)·v_i` where
    /// `L(x)/(x − z) = Σ_i h_i(z)·x^i`.
    pub fn interpolate(base: &QPoly, values: &[Rational]) -> ExponentialSum {
        let l = base.monic();
        let d = l.deg();
        assert_eq!(values.len(), d);
        let a = l.coeffs();
        let mut num = QPoly::zero();
        for (i, v) in values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            // h_i(z) = Σ_{j>i} a_j z^{j−i−1}
            let h = QPoly::new((i + 1..=d).map(|j| a[j].clone()).collect());
            num = &num + &h.scale(v);
        }
        let c = (&num * &mod_inverse(&l.derivative(), &l)).rem(&l);
        ExponentialSum::from_trace_form(&l, &c)
    }

    /// Explicit `(coefficient, base)` pairs.
    pub fn terms(&self) -> Vec<(ComplexAlgebraic, ComplexAlgebraic)> {
        if self.is_zero() {
            return Vec::new();
        }
        let rs = Arc::new(RootSet::new(&self.base));
        (0..rs.len())
            .map(|i| {
                let c = FieldElement::embedded(&rs, i, &self.coeff).to_complex();
                (c, ComplexAlgebraic::from_root(&rs, i))
            })
            .collect()
    }
}

impl std::fmt::Display for ExponentialSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "Σ_(α: {} = 0) ({})(α)·α^n", self.base, self.coeff)
    }
}

/// Iterator over the terms of an exponential sum.
pub struct Terms {
    m: QPoly,
    /// The last `deg m` terms.
    window: VecDeque<Rational>,
    pending: VecDeque<Rational>,
}

impl Iterator for Terms {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let d = self.m.deg();
        let v = match self.pending.pop_front() {
            Some(v) => v,
            None if self.window.len() < d => Rational::zero(),
            None => -(0..d).map(|i| self.m.coeff(i) * &self.window[i]).sum::<Rational>(),
        };
        if d > 0 {
            if self.window.len() == d {
                self.window.pop_front();
            }
            self.window.push_back(v.clone());
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};

    #[test]
    fn rational_terms_evaluate() {
        let s = ExponentialSum::from_rational_terms(&[(rat(1), rat(2)), (rat(3), rat(-1))]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.values(4), [4, -1, 7, 5].map(rat).to_vec());
        assert_eq!(s.eval(10), rat(1024 + 3));
        let z = s.add(&s.scale(&rat(-1)));
        assert!(z.is_zero());
    }

    #[test]
    fn merging_common_bases() {
        let a = ExponentialSum::from_rational_terms(&[(rat(1), rat(2)), (rat(1), rat(3))]);
        let b = ExponentialSum::from_rational_terms(&[(rat(-1), rat(2)), (rat(5), rat(7))]);
        let s = a.add(&b);
        assert_eq!(s.len(), 2);
        assert_eq!(s.eval(2), rat(9 + 5 * 49));
    }

    #[test]
    fn conjugate_pair_from_quadratic() {
        // coefficient 1/2 at each root of x^2 - x + 3: u_n = (α^n + ᾱ^n)/2
        let s = ExponentialSum::from_trace_form(&QPoly::from_ints(&[3, -1, 1]), &QPoly::constant(ratio(1, 2)));
        // power sums of x^2 - x + 3: 2, 1, -5, -8
        assert_eq!(s.values(4), [ratio(1, 1), ratio(1, 2), ratio(-5, 2), rat(-4)].to_vec());
    }

    #[test]
    fn substitution_merges_opposite_bases() {
        // 2^n + (-2)^n: even residue gives 2·4^q, odd residue vanishes
        let s = ExponentialSum::from_rational_terms(&[(rat(1), rat(2)), (rat(1), rat(-2))]);
        let even = s.substitute(2, 0);
        assert_eq!(even, ExponentialSum::from_rational_terms(&[(rat(2), rat(4))]));
        assert!(s.substitute(2, 1).is_zero());
        let all = s.residue_sums(2);
        assert_eq!(all[0], even);
        assert!(all[1].is_zero());
    }

    #[test]
    fn from_recurrence() {
        // u_n = 2u_{n-1} + 3u_{n-2}: roots 3 and -1
        let l = Lrs::from_ints(&[2, 3], &[1, 5]).unwrap();
        let s = ExponentialSum::from_lrs(&l).unwrap();
        for n in 0..10 {
            assert_eq!(s.eval(n as u64), l.term(n));
        }
        assert!(ExponentialSum::from_lrs(&Lrs::from_ints(&[2, -1], &[0, 1]).unwrap()).is_none());
    }

    #[test]
    fn long_prefix_matches_powering() {
        let base = QPoly::from_ints(&[1, -3, 0, 1]);
        let s = ExponentialSum::from_trace_form(&base, &QPoly::new(vec![ratio(1, 3), rat(-2), rat(1)]));
        let v = s.values(40);
        for n in [0usize, 1, 2, 3, 17, 39] {
            assert_eq!(v[n], s.eval(n as u64), "n = {n}");
        }
    }

    #[test]
    fn interpolation_inverts_values() {
        let base = QPoly::from_ints(&[3, -1, 1]);
        let s = ExponentialSum::from_trace_form(&base, &QPoly::from_ints(&[2, -1]));
        let back = ExponentialSum::interpolate(&base, &s.values(2));
        assert_eq!(back, s);
    }
}
