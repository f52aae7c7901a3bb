//! Random sets of companion matrices with distinct rational roots, and a
//! ground-truth labeler that never touches the library's sign analysis.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use powersign::exact::{ratio, QMatrix, QPoly, Rational};
use powersign::reductions::WeightedMatrixSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub struct Instance {
    pub set: WeightedMatrixSet,
    /// Distinct eigenvalues of every matrix, nonzero ones only.
    pub roots: Vec<Rational>,
}

fn root_pool() -> Vec<Rational> {
    [(-3, 1), (-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1), (3, 1)]
        .iter()
        .map(|&(p, q)| ratio(p, q))
        .collect()
}

pub fn generate(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = root_pool();
    let weights = [-2i64, -1, 1, 2, 3];
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let mut pairs = Vec::new();
            let mut roots = Vec::new();
            for _ in 0..m {
                let rs: Vec<Rational> = pool.choose_multiple(&mut rng, k).cloned().collect();
                let a = companion(&QPoly::from_roots(&rs));
                roots.extend(rs.into_iter().filter(|r| !r.is_zero()));
                pairs.push((ratio(*weights.choose(&mut rng).unwrap(), 1), a));
            }
            roots.sort();
            roots.dedup();
            Instance { set: WeightedMatrixSet::new(pairs).unwrap(), roots }
        })
        .collect()
}

/// Solves the square system `m·x = b` by Gauss–Jordan elimination.
fn solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("Vandermonde system is regular");
        m.swap(col, piv);
        b.swap(col, piv);
        let inv = m[col][col].recip();
        for j in 0..n {
            m[col][j] = &m[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    b
}

/// `c_λ` with `value(n) = Σ c_λ λⁿ` for `n ≥ 1`, from the first values.
fn coefficients(roots: &[Rational], values: &[BigRational]) -> Vec<BigRational> {
    let n = roots.len();
    let m: Vec<Vec<BigRational>> =
        (1..=n).map(|e| roots.iter().map(|r| num_traits::pow(r.clone(), e)).collect()).collect();
    solve(m, values[..n].to_vec())
}

/// Eventual sign of `Σ c_λ λⁿ` along `n ≡ parity (mod 2)`; zero when the
/// sum vanishes identically on that parity.
fn parity_sign(roots: &[Rational], coeffs: &[BigRational], parity: u32) -> i32 {
    let mut by_modulus: BTreeMap<Rational, BigRational> = BTreeMap::new();
    for (r, c) in roots.iter().zip(coeffs) {
        let sign = if r.is_negative() && parity == 1 { -BigRational::one() } else { BigRational::one() };
        *by_modulus.entry(r.abs()).or_insert_with(BigRational::zero) += sign * c;
    }
    for (_, d) in by_modulus.iter().rev() {
        if !d.is_zero() {
            return if d.is_positive() { 1 } else { -1 };
        }
    }
    0
}

/// `(eventually non-negative, eventually positive)` from the dominant
/// rational roots of every entry on both parities.
pub fn label(inst: &Instance) -> (bool, bool) {
    let k = inst.set.dim();
    let n = inst.roots.len();
    let sums = inst.set.power_sums_prefix(n.max(1) as u64);
    let mut nonneg = true;
    let mut pos = true;
    for p in 0..k {
        for q in 0..k {
            let values: Vec<BigRational> = sums.iter().map(|m| m.get(p, q).clone()).collect();
            if n == 0 {
                pos = false;
                continue;
            }
            let c = coefficients(&inst.roots, &values);
            for parity in 0..2 {
                let s = parity_sign(&inst.roots, &c, parity);
                nonneg &= s >= 0;
                pos &= s > 0;
            }
        }
    }
    (nonneg, pos)
}

/// Ones on the subdiagonal, negated low coefficients in the last column.
pub fn companion(p: &QPoly) -> QMatrix {
    let k = p.deg();
    let mut a = QMatrix::zero(k, k);
    for i in 1..k {
        a.set(i, i - 1, Rational::one());
    }
    for i in 0..k {
        a.set(i, k - 1, -p.coeff(i));
    }
    a
}
