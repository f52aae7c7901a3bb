//! Perturbing the eigenvalues of a diagonalizable matrix by positive
//! rational factors, and the reduction from weighted sums of diagonalizable
//! matrices to weighted sums of simple ones.
//!
//! A perturbation multiplies diagonal position `i` of `D` by `ε_i`. When every
//! α-segment reuses the same leading values (a segmented perturbation), all
//! conjugate roots of one eigenvector block are scaled alike at each position,
//! so the perturbed matrix is a sum of block traces and stays rational.

use crate::algebraic::field::{trace_mod, FieldElement};
use crate::algebraic::modulus::modulus_classes_of;
use crate::algebraic::real::RealAlgebraic;
use crate::algebraic::resultant::composed_quotient;
use crate::exact::rational::{dyadic_floor, exact_sqrt, format_rational, Rational};
use crate::exact::{QMatrix, QPoly};
use crate::reductions::WeightedMatrixSet;
use crate::spectral::{eigendecompose, EigenDecomposition, SpectralError};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PerturbationError {
    #[error("perturbation has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("perturbation entry {0} is zero")]
    ZeroEntry(usize),
    #[error("perturbation differs at conjugate positions {0} and {1}")]
    ConjugateMismatch(usize, usize),
    #[error("perturbation is not segmented")]
    NotSegmented,
    #[error("perturbation mixes signs within the first segment")]
    MixedSigns,
    #[error("plan does not match the matrix set")]
    PlanMismatch,
    #[error("precision must be positive")]
    BadPrecision,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The factors `ε_1, …, ε_k` applied to the diagonal of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    eps: Vec<Rational>,
}

impl Perturbation {
    pub fn new(dec: &EigenDecomposition, eps: Vec<Rational>) -> Result<Perturbation, PerturbationError> {
        if eps.len() != dec.dim() {
            return Err(PerturbationError::Length { expected: dec.dim(), got: eps.len() });
        }
        if let Some(i) = eps.iter().position(|e| e.is_zero()) {
            return Err(PerturbationError::ZeroEntry(i));
        }
        for (i, &j) in dec.sigma().iter().enumerate() {
            if eps[i] != eps[j] {
                return Err(PerturbationError::ConjugateMismatch(i, j));
            }
        }
        Ok(Perturbation { eps })
    }

    /// The segmented perturbation whose segments all start with `first`.
    pub fn segmented(dec: &EigenDecomposition, first: &[Rational]) -> Result<Perturbation, PerturbationError> {
        let rho1 = dec.segments()[0].multiplicity;
        if first.len() != rho1 {
            return Err(PerturbationError::Length { expected: rho1, got: first.len() });
        }
        let mut eps = vec![Rational::zero(); dec.dim()];
        for s in dec.segments() {
            for l in 0..s.multiplicity {
                eps[s.offset + l] = first[l].clone();
            }
        }
        Perturbation::new(dec, eps)
    }

    pub fn eps(&self) -> &[Rational] {
        &self.eps
    }
}

pub fn is_segmented(dec: &EigenDecomposition, e: &Perturbation) -> bool {
    dec.segments()
        .iter()
        .all(|s| (0..s.multiplicity).all(|l| e.eps[s.offset + l] == e.eps[l]))
}

/// One cyclic step of the first segment, `ε'_{(i mod ρ₁)+1} = ε_i`, with the
/// other segments re-derived from it.
pub fn rotate(dec: &EigenDecomposition, e: &Perturbation) -> Result<Perturbation, PerturbationError> {
    if !is_segmented(dec, e) {
        return Err(PerturbationError::NotSegmented);
    }
    let rho1 = dec.segments()[0].multiplicity;
    let mut first = vec![Rational::zero(); rho1];
    for i in 0..rho1 {
        first[(i + 1) % rho1] = e.eps[i].clone();
    }
    Perturbation::segmented(dec, &first)
}

/// The perturbed variant of a segmented perturbation, which is rational:
/// `Σ_blocks Σ_l ε_l · Tr(x · cols_l · rows_lᵀ)`.
pub fn segmented_variant(dec: &EigenDecomposition, e: &Perturbation) -> Result<QMatrix, PerturbationError> {
    if !is_segmented(dec, e) {
        return Err(PerturbationError::NotSegmented);
    }
    let k = dec.dim();
    let mut out = QMatrix::zero(k, k);
    for blk in dec.blocks() {
        for (l, (c, r)) in blk.cols.iter().zip(blk.rows.iter()).enumerate() {
            let eps = &e.eps[l];
            for p in 0..k {
                for q in 0..k {
                    let t = trace_mod(&(&(&c[p] * &r[q]) * &QPoly::x()), &blk.modulus);
                    if !t.is_zero() {
                        let v = out.get(p, q) + eps * t;
                        out.set(p, q, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `S·D′·S⁻¹` with `D′[i,i] = ε_i·D[i,i]`, entrywise real algebraic.
pub fn perturbed_variant(
    dec: &EigenDecomposition,
    e: &Perturbation,
) -> Result<Vec<Vec<RealAlgebraic>>, PerturbationError> {
    if e.eps.len() != dec.dim() {
        return Err(PerturbationError::Length { expected: dec.dim(), got: e.eps.len() });
    }
    if is_segmented(dec, e) {
        let m = segmented_variant(dec, e)?;
        return Ok(m.to_rows().into_iter().map(|r| r.into_iter().map(RealAlgebraic::from_rational).collect()).collect());
    }
    let k = dec.dim();
    let mut rational = QMatrix::zero(k, k);
    let mut algebraic: Vec<Vec<Option<RealAlgebraic>>> = vec![vec![None; k]; k];
    for (b, blk) in dec.blocks().iter().enumerate() {
        let segs: Vec<_> = dec.segments().iter().enumerate().filter(|(_, s)| s.block == b).collect();
        for l in 0..blk.multiplicity {
            let first = &e.eps[segs[0].1.offset + l];
            let uniform = segs.iter().all(|(_, s)| &e.eps[s.offset + l] == first);
            for p in 0..k {
                for q in 0..k {
                    let term = &(&blk.cols[l][p] * &blk.rows[l][q]) * &QPoly::x();
                    if uniform {
                        let v = rational.get(p, q) + first * trace_mod(&term, &blk.modulus);
                        rational.set(p, q, v);
                        continue;
                    }
                    // each conjugate pair contributes 2·ε·Re, each real root ε·value
                    for (_, s) in &segs {
                        let conj = blk.roots.conjugate(s.root);
                        if conj < s.root {
                            continue;
                        }
                        let value = FieldElement::embedded(&blk.roots, s.root, &term).to_complex().re;
                        let mut f = e.eps[s.offset + l].clone();
                        if conj != s.root {
                            f *= Rational::from_integer(2.into());
                        }
                        let add = value.scale(&f);
                        let cell = &mut algebraic[p][q];
                        *cell = Some(match cell.take() {
                            Some(acc) => acc.add(&add),
                            None => add,
                        });
                    }
                }
            }
        }
    }
    Ok((0..k)
        .map(|p| {
            (0..k)
                .map(|q| {
                    let r = RealAlgebraic::from_rational(rational.get(p, q).clone());
                    match &algebraic[p][q] {
                        Some(a) => a.add(&r),
                        None => r,
                    }
                })
                .collect()
        })
        .collect())
}

/// `(Σ_u A_uⁿ, Σ_j ε_jⁿ)` over the `ρ₁` rotations `A_u` of a segmented
/// perturbation; the two satisfy `Σ_u A_uⁿ = (Σ_j ε_jⁿ)·Aⁿ`.
pub fn lemma7_fold(
    dec: &EigenDecomposition,
    e: &Perturbation,
    n: u64,
) -> Result<(QMatrix, Rational), PerturbationError> {
    if !is_segmented(dec, e) {
        return Err(PerturbationError::NotSegmented);
    }
    let rho1 = dec.segments()[0].multiplicity;
    let first = &e.eps[..rho1];
    if !(first.iter().all(|x| x.is_positive()) || first.iter().all(|x| x.is_negative())) {
        return Err(PerturbationError::MixedSigns);
    }
    let k = dec.dim();
    let mut total = QMatrix::zero(k, k);
    let mut cur = e.clone();
    for _ in 0..rho1 {
        total = total.add(&segmented_variant(dec, &cur)?.pow(n)).expect("same shape");
        cur = rotate(dec, &cur)?;
    }
    let scalar = first.iter().fold(Rational::zero(), |acc, x| acc + num_traits::pow(x.clone(), n as usize));
    Ok((total, scalar))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsilonMode {
    Exact,
    /// Keep the reduced sum within `precisionⁿ` of the original.
    Precision(Rational),
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixPlan {
    /// Largest eigenvalue multiplicity `μ_i`.
    pub mu: u64,
    /// Number of segmented perturbations `μ/μ_i`.
    pub eta: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationPlan {
    pub mu: u64,
    #[serde(with = "crate::exact::rational::as_string_vec")]
    pub epsilons: Vec<Rational>,
    /// The rational values among the eigenvalue modulus ratios.
    #[serde(with = "crate::exact::rational::as_string_vec")]
    pub forbidden: Vec<Rational>,
    pub matrices: Vec<MatrixPlan>,
    #[serde(skip)]
    pub mode: EpsilonMode,
}

/// Distinct `|λ|²` over all eigenvalues of `dec`, zero excluded.
fn squared_moduli(dec: &EigenDecomposition) -> Vec<RealAlgebraic> {
    let mut out: Vec<RealAlgebraic> = Vec::new();
    for blk in dec.blocks() {
        for class in modulus_classes_of(&blk.roots) {
            let v = class.modulus_squared;
            if v.is_zero() || out.contains(&v) {
                continue;
            }
            out.push(v);
        }
    }
    out
}

/// `sqrt(a/b)` when it is rational.
fn rational_modulus_ratio(a: &RealAlgebraic, b: &RealAlgebraic) -> Option<Rational> {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => return exact_sqrt(&(x / y)),
        (Some(_), None) | (None, Some(_)) => return None,
        _ => {}
    }
    let q = composed_quotient(a.defining(), b.defining()).squarefree_part();
    RealAlgebraic::real_roots(&q)
        .into_iter()
        .filter_map(|r| r.as_rational().cloned())
        .filter(|c| c.is_positive())
        .find(|c| &b.scale(c) == a)
        .and_then(|c| exact_sqrt(&c))
}

fn forbidden_ratios(decs: &[EigenDecomposition]) -> BTreeSet<Rational> {
    let mut set = BTreeSet::new();
    set.insert(Rational::one());
    for dec in decs {
        let mods = squared_moduli(dec);
        for (i, a) in mods.iter().enumerate() {
            for b in &mods[i + 1..] {
                if let Some(r) = rational_modulus_ratio(a, b) {
                    set.insert(r.recip());
                    set.insert(r);
                }
            }
        }
    }
    set
}

/// Upper bound on `|λ|` over all eigenvalues, and on `|S[p,r]·S⁻¹[r,q]|`.
fn spectral_bounds(decs: &[EigenDecomposition]) -> (Rational, Rational) {
    let bits = 24;
    let mut alpha = Rational::zero();
    let mut gamma = Rational::zero();
    for dec in decs {
        let k = dec.dim();
        for i in 0..k {
            let d = dec.d_entry(i).enclosure(bits);
            let m = d.abs_sq().hi;
            alpha = alpha.max(crate::exact::rational::sqrt_upper(&m, bits));
            for p in 0..k {
                let s = dec.s_entry(p, i).enclosure(bits);
                for q in 0..k {
                    let t = s.mul(&dec.s_inv_entry(i, q).enclosure(bits));
                    gamma = gamma.max(crate::exact::rational::sqrt_upper(&t.abs_sq().hi, bits));
                }
            }
        }
    }
    (alpha, gamma)
}

pub fn decompose_all(set: &WeightedMatrixSet) -> Result<Vec<EigenDecomposition>, PerturbationError> {
    set.pairs().iter().map(|(_, a)| eigendecompose(a).map_err(PerturbationError::from)).collect()
}

/// Picks `ε_1, …, ε_μ` so that no ratio of two of them is an eigenvalue
/// modulus ratio of any matrix. Candidates run through `1, 1/2, 1/3, …`;
/// in precision mode `ε_1 = 1` and the rest are scaled below the bound that
/// keeps the reduced sum within `precisionⁿ`.
pub fn choose_epsilons(
    set: &WeightedMatrixSet,
    decs: &[EigenDecomposition],
    mode: EpsilonMode,
) -> Result<PerturbationPlan, PerturbationError> {
    if decs.len() != set.len() {
        return Err(PerturbationError::PlanMismatch);
    }
    let mus: Vec<u64> = decs.iter().map(|d| d.segments()[0].multiplicity as u64).collect();
    let mu = mus.iter().fold(1u64, |acc, m| acc.lcm(m));
    let forbidden = forbidden_ratios(decs);
    let ok = |chosen: &[Rational], c: &Rational| chosen.iter().all(|p| !forbidden.contains(&(c / p)));

    let mut epsilons: Vec<Rational> = Vec::new();
    let scale = match &mode {
        EpsilonMode::Exact => Rational::one(),
        EpsilonMode::Precision(eps) => {
            if !eps.is_positive() {
                return Err(PerturbationError::BadPrecision);
            }
            epsilons.push(Rational::one());
            let k = Rational::from_integer(set.dim().into());
            let (alpha, gamma) = spectral_bounds(decs);
            let weights = set.pairs().iter().fold(Rational::zero(), |acc, (w, _)| acc + w.abs());
            let one = Rational::one();
            let denom = Rational::from_integer(mu.into())
                * k
                * alpha.max(one.clone())
                * gamma.max(one.clone())
                * weights.max(one.clone());
            let bound = (eps / denom).min(one);
            // strictly below the bound, with a short representation
            let mut b = dyadic_floor(&bound, 64);
            if b >= bound || b.is_zero() {
                b = &bound / Rational::from_integer(2.into());
            }
            b
        }
    };
    let mut t = 1i64;
    while (epsilons.len() as u64) < mu {
        let c = &scale / Rational::from_integer(t.into());
        t += 1;
        if !epsilons.contains(&c) && ok(&epsilons, &c) {
            epsilons.push(c);
        }
    }
    Ok(PerturbationPlan {
        mu,
        epsilons,
        forbidden: forbidden.into_iter().collect(),
        matrices: mus.iter().map(|&m| MatrixPlan { mu: m, eta: mu / m }).collect(),
        mode,
    })
}

/// One output pair `(w_i, A_{i,j,u})` of the reduction.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedPair {
    #[serde(with = "crate::exact::rational::as_string")]
    pub weight: Rational,
    pub matrix: QMatrix,
    pub source: usize,
    pub segment_choice: usize,
    pub rotation: usize,
    #[serde(with = "crate::exact::rational::as_string_vec")]
    pub perturbation: Vec<Rational>,
}

/// Output of the reduction: `f(n)·Σ w_i A_iⁿ = Σ v B ⁿ` with
/// `f(n) = Σ_j ε_jⁿ > 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub pairs: Vec<ReducedPair>,
    #[serde(with = "crate::exact::rational::as_string_vec")]
    pub epsilons: Vec<Rational>,
}

impl Reduction {
    pub fn scale_factor(&self, n: u64) -> Rational {
        self.epsilons
            .iter()
            .fold(Rational::zero(), |acc, e| acc + num_traits::pow(e.clone(), n as usize))
    }

    pub fn weighted_set(&self) -> WeightedMatrixSet {
        WeightedMatrixSet::new(self.pairs.iter().map(|p| (p.weight.clone(), p.matrix.clone())).collect())
            .expect("reduction output is a valid set")
    }

    pub fn weighted_power_sum(&self, n: u64) -> QMatrix {
        self.weighted_set().weighted_power_sum(n).expect("n ≥ 1")
    }

    pub fn epsilon_strings(&self) -> Vec<String> {
        self.epsilons.iter().map(format_rational).collect()
    }
}

/// Output matrices are simple except that a zero eigenvalue of multiplicity
/// above one stays repeated, since scaling cannot separate it.
pub fn algorithm1_reduce(
    set: &WeightedMatrixSet,
    decs: &[EigenDecomposition],
    plan: &PerturbationPlan,
) -> Result<Reduction, PerturbationError> {
    if decs.len() != set.len() || plan.matrices.len() != set.len() || plan.epsilons.len() as u64 != plan.mu {
        return Err(PerturbationError::PlanMismatch);
    }
    let mut pairs = Vec::new();
    for (i, ((w, _), dec)) in set.pairs().iter().zip(decs).enumerate() {
        let mu_i = plan.matrices[i].mu as usize;
        if dec.segments()[0].multiplicity != mu_i {
            return Err(PerturbationError::PlanMismatch);
        }
        for j in 0..plan.matrices[i].eta as usize {
            let first = &plan.epsilons[j * mu_i..(j + 1) * mu_i];
            let mut e = Perturbation::segmented(dec, first)?;
            for u in 0..mu_i {
                pairs.push(ReducedPair {
                    weight: w.clone(),
                    matrix: segmented_variant(dec, &e)?,
                    source: i,
                    segment_choice: j,
                    rotation: u,
                    perturbation: e.eps.clone(),
                });
                e = rotate(dec, &e)?;
            }
        }
    }
    Ok(Reduction { pairs, epsilons: plan.epsilons.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};
    use crate::spectral::{classify, SpectralClass};

    fn fig2() -> QMatrix {
        QMatrix::from_ints(&[[5, 12, -6], [-3, -10, 6], [-3, -12, 8]])
    }

    /// Eigenvalue 3 three times, 1 ± i twice each, and −1: segment layout
    /// (α₁,α₁,α₁,α₂,α₂,ᾱ₂,ᾱ₂,α₃).
    fn layout_matrix() -> QMatrix {
        let mut a = QMatrix::zero(8, 8);
        for i in 0..3 {
            a.set(i, i, rat(3));
        }
        let r = QMatrix::from_ints(&[[1, -1], [1, 1]]);
        a.set_block(3, 3, &r);
        a.set_block(5, 5, &r);
        a.set(7, 7, rat(-1));
        a
    }

    fn eps(v: &[i64]) -> Vec<Rational> {
        // ε_j = 1/(j+1), indices 1-based in the argument
        v.iter().map(|&j| ratio(1, j + 1)).collect()
    }

    #[test]
    fn segmentation_on_layout() {
        let dec = eigendecompose(&layout_matrix()).unwrap();
        assert_eq!(dec.multiplicities(), vec![3, 2, 2, 1]);
        let seg = Perturbation::new(&dec, eps(&[1, 2, 3, 1, 2, 1, 2, 1])).unwrap();
        assert!(is_segmented(&dec, &seg));
        let not = Perturbation::new(&dec, eps(&[1, 2, 3, 2, 3, 2, 3, 1])).unwrap();
        assert!(!is_segmented(&dec, &not));
        let r = rotate(&dec, &seg).unwrap();
        assert_eq!(r.eps(), eps(&[3, 1, 2, 3, 1, 3, 1, 3]).as_slice());
        let r3 = rotate(&dec, &rotate(&dec, &r).unwrap()).unwrap();
        assert_eq!(r3, seg);
        assert_eq!(rotate(&dec, &not).unwrap_err(), PerturbationError::NotSegmented);
        // conjugate positions must agree
        assert!(matches!(
            Perturbation::new(&dec, eps(&[1, 2, 3, 1, 2, 2, 1, 1])),
            Err(PerturbationError::ConjugateMismatch(..))
        ));
    }

    #[test]
    fn trivial_segmentation() {
        let dec = eigendecompose(&QMatrix::from_ints(&[[7]])).unwrap();
        let e = Perturbation::new(&dec, vec![ratio(-2, 3)]).unwrap();
        assert!(is_segmented(&dec, &e));
        assert_eq!(rotate(&dec, &e).unwrap(), e);
    }

    #[test]
    fn variants() {
        let a = fig2();
        let dec = eigendecompose(&a).unwrap();
        let ones = Perturbation::new(&dec, vec![rat(1); 3]).unwrap();
        assert_eq!(segmented_variant(&dec, &ones).unwrap(), a);

        let e = Perturbation::new(&dec, vec![ratio(1, 2), ratio(1, 3), ratio(1, 2)]).unwrap();
        let v = segmented_variant(&dec, &e).unwrap();
        let cp = v.char_poly().unwrap();
        assert_eq!(cp, QPoly::from_roots(&[rat(1), ratio(2, 3), ratio(-1, 2)]));

        let rot = QMatrix::from_ints(&[[0, -1], [1, 0]]);
        let dec = eigendecompose(&rot).unwrap();
        let e = Perturbation::new(&dec, vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(segmented_variant(&dec, &e).unwrap(), rot.scale(&ratio(1, 2)));
    }

    #[test]
    fn non_segmented_variant_is_real() {
        // eigenvalues 2, 2, -1; ε = (1/2, 1, 1): only one 2-direction is scaled
        let a = fig2();
        let dec = eigendecompose(&a).unwrap();
        let e = Perturbation::new(&dec, vec![ratio(1, 2), rat(1), rat(1)]).unwrap();
        assert!(!is_segmented(&dec, &e));
        let v = perturbed_variant(&dec, &e).unwrap();
        let m = QMatrix::from_rows(
            v.iter().map(|r| r.iter().map(|x| x.as_rational().unwrap().clone()).collect()).collect(),
        )
        .unwrap();
        assert_eq!(m.char_poly().unwrap(), QPoly::from_roots(&[rat(1), rat(2), rat(-1)]));

        // companion of (x − 2)(x² + 1): halve the pair ±i and keep 2, which gives
        // A/2 + P₂ with P₂ = (A² + I)/5 the projector onto the 2-eigenspace
        let b = QMatrix::from_ints(&[[0, 1, 0], [0, 0, 1], [2, -1, 2]]);
        let dec = eigendecompose(&b).unwrap();
        let sigma = dec.sigma().to_vec();
        let eps: Vec<Rational> = (0..3).map(|i| if sigma[i] != i { ratio(1, 2) } else { rat(1) }).collect();
        let e = Perturbation::new(&dec, eps).unwrap();
        assert!(!is_segmented(&dec, &e));
        let v = perturbed_variant(&dec, &e).unwrap();
        let p2 = b.mul(&b).add(&QMatrix::identity(3)).unwrap().scale(&ratio(1, 5));
        let expect = b.scale(&ratio(1, 2)).add(&p2).unwrap();
        for p in 0..3 {
            for q in 0..3 {
                assert!(v[p][q].cmp_rational(expect.get(p, q)).is_eq(), "entry ({p},{q})");
            }
        }
    }

    #[test]
    fn fold_identity() {
        let a = fig2();
        let dec = eigendecompose(&a).unwrap();
        let e = Perturbation::segmented(&dec, &[ratio(1, 2), ratio(1, 3)]).unwrap();
        let (sum, scalar) = lemma7_fold(&dec, &e, 3).unwrap();
        assert_eq!(scalar, ratio(1, 8) + ratio(1, 27));
        assert_eq!(sum, a.pow(3).scale(&scalar));
        let mixed = Perturbation::segmented(&dec, &[ratio(1, 2), ratio(-1, 3)]).unwrap();
        assert_eq!(lemma7_fold(&dec, &mixed, 2).unwrap_err(), PerturbationError::MixedSigns);

        let d = eigendecompose(&QMatrix::from_ints(&[[0, 1], [1, 0]])).unwrap();
        let e = Perturbation::segmented(&d, &[ratio(2, 5)]).unwrap();
        let (sum, scalar) = lemma7_fold(&d, &e, 4).unwrap();
        assert_eq!(scalar, num_traits::pow(ratio(2, 5), 4));
        assert_eq!(sum, QMatrix::from_ints(&[[0, 1], [1, 0]]).pow(4).scale(&scalar));
    }

    #[test]
    fn plans() {
        let set = WeightedMatrixSet::from_ints(&[(1, QMatrix::from_ints(&[[0, 1], [1, 0]]))]).unwrap();
        let decs = decompose_all(&set).unwrap();
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Exact).unwrap();
        assert_eq!(plan.mu, 1);
        assert_eq!(plan.epsilons, vec![rat(1)]);

        let set = WeightedMatrixSet::from_ints(&[(1, fig2())]).unwrap();
        let decs = decompose_all(&set).unwrap();
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Exact).unwrap();
        assert_eq!(plan.mu, 2);
        assert_eq!(plan.forbidden, vec![ratio(1, 2), rat(1), rat(2)]);
        // 1/2 is a forbidden ratio to 1, so the second choice is 1/3
        assert_eq!(plan.epsilons, vec![rat(1), ratio(1, 3)]);
    }

    #[test]
    fn irrational_ratios_do_not_constrain() {
        // eigenvalues ±√2 and 1: modulus ratio √2 is irrational
        let a = QMatrix::from_ints(&[[0, 2, 0], [1, 0, 0], [0, 0, 1]]);
        let set = WeightedMatrixSet::from_ints(&[(1, a)]).unwrap();
        let decs = decompose_all(&set).unwrap();
        assert_eq!(forbidden_ratios(&decs).into_iter().collect::<Vec<_>>(), vec![rat(1)]);
        // eigenvalues ±2√2 and √2 (moduli² 8 and 2): ratio 2 is rational
        let b = QMatrix::from_ints(&[[0, 8, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]]);
        let set = WeightedMatrixSet::from_ints(&[(1, b)]).unwrap();
        let decs = decompose_all(&set).unwrap();
        assert_eq!(
            forbidden_ratios(&decs).into_iter().collect::<Vec<_>>(),
            vec![ratio(1, 2), rat(1), rat(2)]
        );
    }

    #[test]
    fn reduction_identity() {
        let set = WeightedMatrixSet::new(vec![
            (rat(1), fig2()),
            (ratio(-1, 2), QMatrix::from_ints(&[[0, 1, 0], [1, 0, 0], [0, 0, 3]])),
        ])
        .unwrap();
        let decs = decompose_all(&set).unwrap();
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Exact).unwrap();
        let red = algorithm1_reduce(&set, &decs, &plan).unwrap();
        assert_eq!(red.pairs.len(), 4);
        for p in &red.pairs {
            assert_eq!(classify(&p.matrix), Ok(SpectralClass::Simple));
        }
        for n in 1..=20 {
            let lhs = set.weighted_power_sum(n).unwrap().scale(&red.scale_factor(n));
            assert_eq!(lhs, red.weighted_power_sum(n));
        }
    }

    #[test]
    fn fig2_reduction_eigenvalues() {
        let set = WeightedMatrixSet::from_ints(&[(1, fig2())]).unwrap();
        let decs = decompose_all(&set).unwrap();
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Exact).unwrap();
        let red = algorithm1_reduce(&set, &decs, &plan).unwrap();
        let (e1, e2) = (plan.epsilons[0].clone(), plan.epsilons[1].clone());
        let two = rat(2);
        assert_eq!(
            red.pairs[0].matrix.char_poly().unwrap(),
            QPoly::from_roots(&[&two * &e1, &two * &e2, -e1.clone()])
        );
        assert_eq!(
            red.pairs[1].matrix.char_poly().unwrap(),
            QPoly::from_roots(&[&two * &e2, &two * &e1, -e2.clone()])
        );
    }

    #[test]
    fn precision_plan_bounds_the_error() {
        let set = WeightedMatrixSet::from_ints(&[(1, fig2())]).unwrap();
        let decs = decompose_all(&set).unwrap();
        let precision = ratio(1, 2);
        let plan = choose_epsilons(&set, &decs, EpsilonMode::Precision(precision.clone())).unwrap();
        assert_eq!(plan.epsilons[0], rat(1));
        let red = algorithm1_reduce(&set, &decs, &plan).unwrap();
        for n in 1..=30u64 {
            let diff = set.weighted_power_sum(n).unwrap().sub(&red.weighted_power_sum(n)).unwrap();
            let bound = num_traits::pow(precision.clone(), n as usize);
            assert!(diff.entries().iter().all(|d| d.abs() < bound), "n = {n}");
        }
    }
}
