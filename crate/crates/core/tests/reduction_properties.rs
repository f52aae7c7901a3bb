mod common;

use common::*;
use num_traits::{One, Signed};
use powersign::exact::{rat, QMatrix, Rational};
use powersign::lrs::Lrs;
use powersign::reductions::{matrix_to_interleaved_lrs, somset_to_lrs, unnlrs_to_ennsom, uplrs_to_epsom, WeightedMatrixSet};
use proptest::prelude::*;

/// Terms by direct iteration of the recurrence.
fn iterate(l: &Lrs, count: usize) -> Vec<Rational> {
    let k = l.order();
    let mut u: Vec<Rational> = l.initial().to_vec();
    while u.len() < count {
        let n = u.len();
        let next = (0..k).map(|j| &l.coeffs()[j] * &u[n - 1 - j]).sum();
        u.push(next);
    }
    u.truncate(count);
    u
}

fn weighted_set() -> impl Strategy<Value = WeightedMatrixSet> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(k, m)| {
        prop::collection::vec((-3i64..=3, int_matrix(k, 3)), m).prop_map(|pairs| {
            WeightedMatrixSet::new(pairs.into_iter().map(|(w, a)| (rat(w), a)).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn three_routes_to_the_terms(l in small_lrs(4)) {
        let k = l.order();
        let iter = iterate(&l, 51);
        prop_assert_eq!(&l.terms(51), &iter);
        let m = l.companion_matrix();
        let g = l.generator_matrix();
        let u: Vec<Rational> = (0..k).map(|j| l.initial()[k - 1 - j].clone()).collect();
        let mut row = u.clone();
        let mut gp = g.clone();
        for expect in &iter {
            // row = u·Mⁿ, gp = G^{n+1}
            prop_assert_eq!(&row[k - 1], expect);
            prop_assert_eq!(gp.get(0, k), expect);
            row = (0..k).map(|j| (0..k).map(|i| &row[i] * m.get(i, j)).sum()).collect();
            gp = gp.mul(&g);
        }
    }

    #[test]
    fn interleaving_projects_back(
        coeffs in prop::collection::vec(-2i64..=2, 1..=3),
        inits in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=3),
    ) {
        let k = coeffs.len();
        let seqs: Vec<Lrs> = inits.iter().map(|i| Lrs::from_ints(&coeffs, &i[..k]).unwrap()).collect();
        let t = seqs.len();
        let inter = Lrs::interleave(&seqs).unwrap();
        let all = inter.terms(31 * t);
        for (s, seq) in seqs.iter().enumerate() {
            let own = seq.terms(31);
            for n in 0..31 {
                prop_assert_eq!(&all[t * n + s], &own[n]);
            }
        }
    }

    #[test]
    fn sum_and_scale_are_linear(x in small_lrs(3), y in small_lrs(3), a in small_rational(), b in small_rational()) {
        let z = x.scale(&a).sum(&y.scale(&b));
        let (tx, ty, tz) = (x.terms(30), y.terms(30), z.terms(30));
        for n in 0..30 {
            prop_assert_eq!(&tz[n], &(&a * &tx[n] + &b * &ty[n]));
        }
    }

    /// Every decoded index of the single recurrence has the sign of the
    /// matching entry of the weighted power sum.
    #[test]
    fn single_recurrence_tracks_entry_signs(set in weighted_set()) {
        let k = set.dim();
        let l = somset_to_lrs(&set);
        let terms = l.terms(25 * k * k);
        let sums = set.power_sums_prefix(25);
        for r in 0..25 {
            for s in 0..k {
                for t in 0..k {
                    let v = &terms[r * k * k + s * k + t];
                    let e = sums[r].get(s, t);
                    prop_assert_eq!(v.signum(), e.signum());
                    prop_assert_eq!(v, e);
                }
            }
        }
    }

    #[test]
    fn nonnegativity_construction_blocks(l in small_lrs(3)) {
        let k = l.order();
        let set = unnlrs_to_ennsom(&l);
        let m = l.companion_matrix();
        let p = set.pairs()[1].1.block(1, 1, k, k);
        let u = QMatrix::from_rows(vec![(0..k).map(|j| l.initial()[k - 1 - j].clone()).collect()]).unwrap();
        let (mut mn, mut pn) = (m.clone(), p.clone());
        let mut u_m = u.clone();
        for n in 1..=25u64 {
            let s = set.weighted_power_sum(n).unwrap();
            prop_assert!(s.block(0, 0, k + 1, 1).is_zero());
            prop_assert_eq!(s.block(0, 1, 1, k), u_m.clone());
            let lower = mn.add(&pn).unwrap();
            prop_assert_eq!(s.block(1, 1, k, k), lower.clone());
            prop_assert!(lower.is_nonnegative());
            u_m = u_m.mul(&m);
            mn = mn.mul(&m);
            pn = pn.mul(&p);
        }
    }

    /// The lower-left block of `A₂ⁿ` for `A₂ = [[1, 0], [1ᵀ, P]]` is
    /// `Σ_{j<n} Pʲ·1ᵀ`.
    #[test]
    fn positivity_construction_blocks(l in small_lrs(3)) {
        let k = l.order();
        let set = uplrs_to_epsom(&l);
        let a2 = &set.pairs()[1].1;
        let p = a2.block(1, 1, k, k);
        let ones = QMatrix::from_rows(vec![vec![Rational::one()]; k]).unwrap();
        let mut acc = QMatrix::zero(k, 1);
        let mut pj = QMatrix::identity(k);
        let mut a2n = a2.clone();
        for n in 1..=25u64 {
            acc = acc.add(&pj.mul(&ones)).unwrap();
            pj = pj.mul(&p);
            prop_assert_eq!(a2n.block(1, 0, k, 1), acc.clone());
            let s = set.weighted_power_sum(n).unwrap();
            prop_assert!(s.block(1, 0, k, k + 1).is_positive());
            a2n = a2n.mul(a2);
        }
    }

    #[test]
    fn interleaved_matrix_entries(a in rational_matrix(3)) {
        let l = matrix_to_interleaved_lrs(&a);
        let terms = l.terms(20 * 9);
        let mut p = a.clone();
        for r in 0..20 {
            for s in 0..3 {
                for t in 0..3 {
                    prop_assert_eq!(&terms[r * 9 + s * 3 + t], p.get(s, t));
                }
            }
            p = p.mul(&a);
        }
    }
}

#[test]
fn interleaved_prefix_signs() {
    // component s of t interleaved sequences is non-negative from
    // ⌈(N − s)/t⌉ exactly when the interleaving is non-negative from N
    let seqs = [
        Lrs::from_ints(&[2, -1], &[-1, 0]).unwrap(),
        Lrs::from_ints(&[2, -1], &[-3, -1]).unwrap(),
        Lrs::from_ints(&[2, -1], &[2, 3]).unwrap(),
    ];
    let t = seqs.len();
    let inter = Lrs::interleave(&seqs).unwrap();
    let horizon = 60;
    for big_n in 0..30usize {
        let whole = inter.prefix_sign_holds(big_n, horizon * t, false);
        let parts = seqs.iter().enumerate().all(|(s, q)| {
            let from = (big_n.saturating_sub(s) + t - 1) / t;
            q.prefix_sign_holds(from, horizon, false)
        });
        assert_eq!(whole, parts, "N = {big_n}");
    }
}

#[test]
fn generator_alone_is_never_nonnegative() {
    let set = WeightedMatrixSet::new(vec![(rat(1), paper_lrs().generator_matrix())]).unwrap();
    for (n, m) in set.power_sums_prefix(100).iter().enumerate() {
        assert!(m.entries().iter().any(|v| v.is_negative()), "n = {}", n + 1);
    }
}
