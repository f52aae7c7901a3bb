#![allow(dead_code)]

pub mod corpus;

use powersign::exact::{ratio, QMatrix, QPoly, Rational};
use powersign::lrs::Lrs;
use proptest::prelude::*;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

pub fn int_matrix(k: usize, bound: i64) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-bound..=bound, k * k).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(k).map(|c| c.to_vec()).collect();
        QMatrix::from_ints(&rows)
    })
}

pub fn rational_matrix(k: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(small_rational(), k * k)
        .prop_map(move |v| QMatrix::from_rows(v.chunks(k).map(|c| c.to_vec()).collect()).unwrap())
}

/// An LRS of order 1..=max_order with small integer data.
pub fn small_lrs(max_order: usize) -> impl Strategy<Value = Lrs> {
    (1..=max_order).prop_flat_map(|k| {
        (prop::collection::vec(-3i64..=3, k), prop::collection::vec(-3i64..=3, k))
            .prop_map(|(c, i)| Lrs::from_ints(&c, &i).unwrap())
    })
}

/// `S·diag(d)·S⁻¹` for an invertible integer `S`.
pub fn conjugated_diagonal(s: &QMatrix, d: &[Rational]) -> Option<QMatrix> {
    let inv = s.inverse()?;
    Some(s.mul(&QMatrix::diagonal(d)).mul(&inv))
}

/// Diagonalizable `k×k` matrices with small rational spectra (repeats allowed).
pub fn diagonalizable(k: usize) -> impl Strategy<Value = QMatrix> {
    (int_matrix(k, 2), prop::collection::vec(-3i64..=3, k))
        .prop_filter_map("singular conjugator", |(s, d)| {
            let d: Vec<Rational> = d.into_iter().map(|x| ratio(x, 1)).collect();
            conjugated_diagonal(&s, &d)
        })
}

/// Plain `Vec<Vec<i64>>` matrix product, independent of the library.
pub fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

/// Matrix polynomial by Horner's rule, independent of `eval_poly`.
pub fn horner(p: &QPoly, a: &QMatrix) -> QMatrix {
    let k = a.rows();
    let mut acc = QMatrix::zero(k, k);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(a).add(&QMatrix::identity(k).scale(c)).unwrap();
    }
    acc
}

pub fn fig2() -> QMatrix {
    QMatrix::from_ints(&[[5, 12, -6], [-3, -10, 6], [-3, -12, 8]])
}

pub fn paper_lrs() -> Lrs {
    Lrs::from_ints(&[2, -1], &[-1, 0]).unwrap()
}
