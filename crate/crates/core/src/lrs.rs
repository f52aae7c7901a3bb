//! Linear recurrence sequences over the rationals.
//!
//! An LRS of order `k` is stored as its recurrence coefficients
//! `(a_{k−1}, …, a_0)` and its first `k` terms, with
//! `u_n = a_{k−1}·u_{n−1} + … + a_0·u_{n−k}`. The constant coefficient may be
//! zero, in which case `k` is only an upper bound on the true order.

use crate::exact::rational::{as_string_vec, Rational};
use crate::exact::{QMatrix, QPoly};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrsError {
    #[error("an LRS needs order at least 1")]
    ZeroOrder,
    #[error("order {order} but {coefficients} coefficients and {initial} initial values")]
    LengthMismatch {
        order: usize,
        coefficients: usize,
        initial: usize,
    },
    #[error("interleaving needs at least one sequence")]
    EmptyInterleave,
    #[error("interleaved sequences must share order and coefficients")]
    RecurrenceMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LrsJson", into = "LrsJson")]
pub struct Lrs {
    coeffs: Vec<Rational>,
    initial: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct LrsJson {
    order: usize,
    #[serde(with = "as_string_vec")]
    coefficients: Vec<Rational>,
    #[serde(with = "as_string_vec")]
    initial: Vec<Rational>,
}

impl TryFrom<LrsJson> for Lrs {
    type Error = LrsError;
    fn try_from(j: LrsJson) -> Result<Self, LrsError> {
        if j.coefficients.len() != j.order || j.initial.len() != j.order {
            return Err(LrsError::LengthMismatch {
                order: j.order,
                coefficients: j.coefficients.len(),
                initial: j.initial.len(),
            });
        }
        Lrs::new(j.coefficients, j.initial)
    }
}

impl From<Lrs> for LrsJson {
    fn from(l: Lrs) -> Self {
        LrsJson {
            order: l.order(),
            coefficients: l.coeffs,
            initial: l.initial,
        }
    }
}

impl Lrs {
    /// `coeffs = (a_{k−1}, …, a_0)`, `initial = (u_0, …, u_{k−1})`.
    pub fn new(coeffs: Vec<Rational>, initial: Vec<Rational>) -> Result<Lrs, LrsError> {
        if coeffs.is_empty() {
            return Err(LrsError::ZeroOrder);
        }
        if coeffs.len() != initial.len() {
            return Err(LrsError::LengthMismatch {
                order: coeffs.len(),
                coefficients: coeffs.len(),
                initial: initial.len(),
            });
        }
        Ok(Lrs { coeffs, initial })
    }

    pub fn from_ints(coeffs: &[i64], initial: &[i64]) -> Result<Lrs, LrsError> {
        let conv = |v: &[i64]| v.iter().map(|&c| Rational::from_integer(c.into())).collect();
        Lrs::new(conv(coeffs), conv(initial))
    }

    /// The sequence satisfying the recurrence of the monic `p` with the given
    /// first `deg p` terms.
    pub fn from_char_poly(p: &QPoly, initial: Vec<Rational>) -> Result<Lrs, LrsError> {
        let p = p.monic();
        let k = p.deg();
        let coeffs = (0..k).map(|i| -p.coeff(k - 1 - i)).collect();
        Lrs::new(coeffs, initial)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `(a_{k−1}, …, a_0)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    /// `x^k − a_{k−1}x^{k−1} − … − a_0`.
    pub fn char_poly(&self) -> QPoly {
        let k = self.order();
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            c[k - 1 - i] = -a;
        }
        QPoly::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.initial.iter().all(|u| u.is_zero())
    }

    /// The terms `u_0, …, u_{count−1}`.
    pub fn terms(&self, count: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.initial.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let mut next = Rational::zero();
            for (i, a) in self.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    next += a * &out[n - 1 - i];
                }
            }
            out.push(next);
        }
        out
    }

    pub fn term(&self, n: usize) -> Rational {
        self.terms(n + 1).pop().unwrap()
    }

    /// Companion matrix: first column `(a_{k−1}, …, a_0)ᵀ`, identity on the
    /// superdiagonal, zeros elsewhere.
    pub fn companion_matrix(&self) -> QMatrix {
        let k = self.order();
        let mut m = QMatrix::zero(k, k);
        for (i, a) in self.coeffs.iter().enumerate() {
            m.set(i, 0, a.clone());
        }
        for i in 0..k.saturating_sub(1) {
            m.set(i, i + 1, Rational::one());
        }
        m
    }

    /// `[[0, u], [0ᵀ, M]]` with `u = (u_{k−1}, …, u_0)`, so that
    /// `u_n = G^{n+1}[1, k+1]`.
    pub fn generator_matrix(&self) -> QMatrix {
        let k = self.order();
        let mut g = QMatrix::zero(k + 1, k + 1);
        for j in 0..k {
            g.set(0, j + 1, self.initial[k - 1 - j].clone());
        }
        g.set_block(1, 1, &self.companion_matrix());
        g
    }

    pub fn scale(&self, w: &Rational) -> Lrs {
        Lrs {
            coeffs: self.coeffs.clone(),
            initial: self.initial.iter().map(|u| u * w).collect(),
        }
    }

    /// Termwise sum, over the lcm of the two characteristic polynomials.
    pub fn sum(&self, other: &Lrs) -> Lrs {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let p = self.char_poly().lcm(&other.char_poly());
        let d = p.deg();
        let (a, b) = (self.terms(d), other.terms(d));
        let initial = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Lrs::from_char_poly(&p, initial).expect("lcm has positive degree")
    }

    /// `v_{t·n+s} = seqs[s]_n`. All inputs must share order and coefficients.
    pub fn interleave(seqs: &[Lrs]) -> Result<Lrs, LrsError> {
        let first = seqs.first().ok_or(LrsError::EmptyInterleave)?;
        if seqs.iter().any(|s| s.coeffs != first.coeffs) {
            return Err(LrsError::RecurrenceMismatch);
        }
        let t = seqs.len();
        let k = first.order();
        let p = first.char_poly().substitute_power(t);
        let mut initial = Vec::with_capacity(t * k);
        for j in 0..k {
            for s in seqs {
                initial.push(s.initial[j].clone());
            }
        }
        Lrs::from_char_poly(&p, initial)
    }

    /// Whether `u_n ≥ 0` (or `> 0` when `strict`) for every `n` in `from..to`.
    pub fn prefix_sign_holds(&self, from: usize, to: usize, strict: bool) -> bool {
        self.terms(to)
            .iter()
            .skip(from)
            .all(|u| if strict { u.is_positive() } else { !u.is_negative() })
    }
}

impl std::fmt::Display for Lrs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(crate::exact::format_rational).collect();
        let u: Vec<String> = self.initial.iter().map(crate::exact::format_rational).collect();
        write!(f, "LRS(order {}, coefficients [{}], initial [{}])", self.order(), c.join(", "), u.join(", "))
    }
}
