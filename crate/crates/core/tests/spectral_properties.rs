mod common;

use common::*;
use num_traits::Signed;
use powersign::algebraic::real::compare;
use powersign::algebraic::ComplexAlgebraic;
use powersign::exact::{rat, ratio, QMatrix, QPoly, Rational};
use powersign::perturbation::{
    algorithm1_reduce, choose_epsilons, decompose_all, lemma7_fold, EpsilonMode, Perturbation,
};
use powersign::reductions::WeightedMatrixSet;
use powersign::spectral::{classify, eigendecompose, SpectralClass};
use proptest::prelude::*;
use std::cmp::Ordering;

fn conj_eq(a: &ComplexAlgebraic, b: &ComplexAlgebraic) -> bool {
    compare(&a.re, &b.re) == Ordering::Equal && compare(&a.im, &b.im.neg()) == Ordering::Equal
}

/// Diagonalizable matrices that may carry complex eigenvalues: a rotation
/// block `[[a, −b], [b, a]]` next to a rational eigenvalue, conjugated.
fn with_rotation() -> impl Strategy<Value = QMatrix> {
    (int_matrix(3, 2), -2i64..=2, 1i64..=2, -3i64..=3).prop_filter_map("singular", |(s, a, b, c)| {
        let mut d = QMatrix::zero(3, 3);
        d.set_block(0, 0, &QMatrix::from_ints(&[[a, -b], [b, a]]));
        d.set(2, 2, rat(c));
        let inv = s.inverse()?;
        Some(s.mul(&d).mul(&inv))
    })
}

fn small_set() -> impl Strategy<Value = WeightedMatrixSet> {
    prop::collection::vec((prop::sample::select(vec![-2i64, -1, 1, 3]), diagonalizable(2)), 1..=2).prop_map(|v| {
        WeightedMatrixSet::new(v.into_iter().map(|(w, a)| (rat(w), a)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_structure(a in prop_oneof![diagonalizable(3), with_rotation()]) {
        let dec = eigendecompose(&a).unwrap();
        let k = a.rows();
        let sigma = dec.sigma();
        for i in 0..k {
            prop_assert_eq!(sigma[sigma[i]], i);
            let di = dec.d_entry(i).to_complex();
            prop_assert_eq!(sigma[i] == i, di.is_real());
            for q in 0..k {
                let x = dec.s_inv_entry(i, q).to_complex();
                let y = dec.s_inv_entry(sigma[i], q).to_complex();
                prop_assert!(conj_eq(&x, &y));
            }
        }
        let mults = dec.multiplicities();
        prop_assert!(mults.windows(2).all(|w| w[0] >= w[1]));
        let offsets = dec.segment_offsets();
        let mut acc = 0;
        for (o, m) in offsets.iter().zip(&mults) {
            prop_assert_eq!(*o, acc);
            acc += m;
        }
        prop_assert_eq!(acc, k);
    }

    #[test]
    fn entry_sums_match_powers(a in prop_oneof![diagonalizable(3), with_rotation()]) {
        let dec = eigendecompose(&a).unwrap();
        let mut p = a.clone();
        let sums: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| dec.entry_sum(i, j)).collect()).collect();
        for n in 1..=12u64 {
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(&sums[i][j].eval(n), p.get(i, j));
                }
            }
            p = p.mul(&a);
        }
    }

    /// `(Σ_j ε_jⁿ)·Aⁿ` is the sum of the powers of the variants for the
    /// rotations of a segmented perturbation.
    #[test]
    fn fold_identity(a in diagonalizable(3), e in prop::sample::subsequence(vec![ratio(1, 2), ratio(1, 3), ratio(2, 5)], 3)) {
        let dec = eigendecompose(&a).unwrap();
        let mu = dec.multiplicities()[0];
        let first: Vec<Rational> = e[..mu].to_vec();
        let pert = Perturbation::segmented(&dec, &first).unwrap();
        let (variants, _) = fold_parts(&dec, &pert, mu);
        let f = |n: u64| first.iter().map(|x| num_traits::pow(x.clone(), n as usize)).sum::<Rational>();
        for n in 1..=20u64 {
            let lhs = a.pow(n).scale(&f(n));
            let rhs = variants.iter().fold(QMatrix::zero(3, 3), |acc, v| acc.add(&v.pow(n)).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
        let (sum, _) = lemma7_fold(&dec, &pert, 1).unwrap();
        prop_assert_eq!(sum, a.scale(&f(1)));
    }

    #[test]
    fn reduction_identity_and_simplicity(set in small_set()) {
        let decs = decompose_all(&set).unwrap();
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Exact).unwrap();
        let red = algorithm1_reduce(&set, &decs, &plan).unwrap();
        for p in &red.pairs {
            // only a repeated zero eigenvalue may survive
            let chi = p.matrix.char_poly().unwrap();
            let nonzero = QPoly::new(chi.coeffs()[chi.x_valuation()..].to_vec());
            prop_assert!(nonzero.is_squarefree());
            if chi.x_valuation() <= 1 {
                prop_assert_eq!(classify(&p.matrix), Ok(SpectralClass::Simple));
            }
        }
        for n in 1..=20u64 {
            let orig = set.weighted_power_sum(n).unwrap();
            let reduced = red.weighted_power_sum(n);
            prop_assert_eq!(orig.scale(&red.scale_factor(n)), reduced.clone());
            for (x, y) in orig.entries().iter().zip(reduced.entries()) {
                prop_assert_eq!(x.signum(), y.signum());
            }
        }
    }

    #[test]
    fn precision_mode_bound(set in small_set()) {
        let decs = decompose_all(&set).unwrap();
        let eps = ratio(1, 2);
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Precision(eps.clone())).unwrap();
        let red = algorithm1_reduce(&set, &decs, &plan).unwrap();
        for n in 1..=30u64 {
            let diff = set.weighted_power_sum(n).unwrap().sub(&red.weighted_power_sum(n)).unwrap();
            let bound = num_traits::pow(eps.clone(), n as usize);
            prop_assert!(diff.entries().iter().all(|d| d.abs() < bound), "n = {}", n);
        }
    }
}

/// The variants for the `mu` rotations of `pert`, built independently of
/// `lemma7_fold` through `segmented_variant`.
fn fold_parts(
    dec: &powersign::spectral::EigenDecomposition,
    pert: &Perturbation,
    mu: usize,
) -> (Vec<QMatrix>, Perturbation) {
    let mut e = pert.clone();
    let mut out = Vec::new();
    for _ in 0..mu {
        out.push(powersign::perturbation::segmented_variant(dec, &e).unwrap());
        e = powersign::perturbation::rotate(dec, &e).unwrap();
    }
    (out, e)
}
