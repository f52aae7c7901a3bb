//! Translations between linear recurrences and weighted sums of matrix powers.

use crate::exact::rational::{as_string, Rational};
use crate::exact::QMatrix;
use crate::lrs::Lrs;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("a weighted matrix set needs at least one pair")]
    EmptySet,
    #[error("matrix {index} is {rows}x{cols}, expected {k}x{k}")]
    BadMatrix {
        index: usize,
        rows: usize,
        cols: usize,
        k: usize,
    },
    #[error("powers are taken for n ≥ 1 only")]
    ZeroPower,
    #[error("entry ({0}, {1}) is outside the matrix")]
    EntryOutOfRange(usize, usize),
    #[error("no entries selected")]
    EmptySelection,
}

/// Pairs `(w_i, A_i)` of rational weights and square matrices of one size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetJson", into = "SetJson")]
pub struct WeightedMatrixSet {
    k: usize,
    pairs: Vec<(Rational, QMatrix)>,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    #[serde(with = "as_string")]
    weight: Rational,
    matrix: QMatrix,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    k: usize,
    pairs: Vec<PairJson>,
}

impl TryFrom<SetJson> for WeightedMatrixSet {
    type Error = ReductionError;
    fn try_from(j: SetJson) -> Result<Self, ReductionError> {
        let set = WeightedMatrixSet::new(j.pairs.into_iter().map(|p| (p.weight, p.matrix)).collect())?;
        if set.k != j.k {
            return Err(ReductionError::BadMatrix { index: 0, rows: set.k, cols: set.k, k: j.k });
        }
        Ok(set)
    }
}

impl From<WeightedMatrixSet> for SetJson {
    fn from(s: WeightedMatrixSet) -> Self {
        SetJson {
            k: s.k,
            pairs: s.pairs.into_iter().map(|(weight, matrix)| PairJson { weight, matrix }).collect(),
        }
    }
}

impl WeightedMatrixSet {
    pub fn new(pairs: Vec<(Rational, QMatrix)>) -> Result<WeightedMatrixSet, ReductionError> {
        let k = pairs.first().ok_or(ReductionError::EmptySet)?.1.rows();
        for (index, (_, m)) in pairs.iter().enumerate() {
            if m.rows() != k || m.cols() != k || k == 0 {
                return Err(ReductionError::BadMatrix { index, rows: m.rows(), cols: m.cols(), k });
            }
        }
        Ok(WeightedMatrixSet { k, pairs })
    }

    /// Convenience constructor from integer weights and matrices.
    pub fn from_ints(pairs: &[(i64, QMatrix)]) -> Result<WeightedMatrixSet, ReductionError> {
        WeightedMatrixSet::new(pairs.iter().map(|(w, m)| (Rational::from_integer((*w).into()), m.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &[(Rational, QMatrix)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn weighted_power_sum(&self, n: u64) -> Result<QMatrix, ReductionError> {
        if n == 0 {
            return Err(ReductionError::ZeroPower);
        }
        let mut acc = QMatrix::zero(self.k, self.k);
        for (w, a) in &self.pairs {
            acc = acc.add(&a.pow(n).scale(w)).expect("same dimension");
        }
        Ok(acc)
    }

    /// `Σ w_i A_i^n` for `n = 1..=count`, by repeated multiplication.
    pub fn power_sums_prefix(&self, count: u64) -> Vec<QMatrix> {
        let mut powers: Vec<QMatrix> = self.pairs.iter().map(|(_, a)| a.clone()).collect();
        let mut out = Vec::with_capacity(count as usize);
        for n in 1..=count {
            if n > 1 {
                for (p, (_, a)) in powers.iter_mut().zip(&self.pairs) {
                    *p = p.mul(a);
                }
            }
            let mut acc = QMatrix::zero(self.k, self.k);
            for (p, (w, _)) in powers.iter().zip(&self.pairs) {
                acc = acc.add(&p.scale(w)).expect("same dimension");
            }
            out.push(acc);
        }
        out
    }
}

fn a_max(lrs: &Lrs) -> Rational {
    lrs.coeffs().iter().map(|a| a.abs()).max().unwrap_or_else(Rational::zero)
}

/// Two matrices whose power sum is eventually non-negative exactly when the
/// sequence is ultimately non-negative: the generator matrix, and
/// `[[0, 0], [0ᵀ, P]]` where `P` is the companion matrix with every
/// recurrence coefficient replaced by the largest absolute coefficient.
pub fn unnlrs_to_ennsom(lrs: &Lrs) -> WeightedMatrixSet {
    let k = lrs.order();
    let mut p = lrs.companion_matrix();
    let amax = a_max(lrs);
    for i in 0..k {
        p.set(i, 0, amax.clone());
    }
    let mut a2 = QMatrix::zero(k + 1, k + 1);
    a2.set_block(1, 1, &p);
    WeightedMatrixSet::new(vec![(Rational::one(), lrs.generator_matrix()), (Rational::one(), a2)])
        .expect("both matrices are (k+1)-square")
}

/// Two matrices whose power sum is eventually positive exactly when the
/// sequence is ultimately positive: the generator matrix, and
/// `[[1, 0], [1ᵀ, P]]` with `P[i][j] = max(|M[i][j]|, a_max) + 1`.
pub fn uplrs_to_epsom(lrs: &Lrs) -> WeightedMatrixSet {
    let k = lrs.order();
    let m = lrs.companion_matrix();
    let amax = a_max(lrs);
    let mut a2 = QMatrix::zero(k + 1, k + 1);
    a2.set(0, 0, Rational::one());
    for i in 0..k {
        a2.set(i + 1, 0, Rational::one());
        for j in 0..k {
            let v = m.get(i, j).abs().max(amax.clone()) + Rational::one();
            a2.set(i + 1, j + 1, v);
        }
    }
    WeightedMatrixSet::new(vec![(Rational::one(), lrs.generator_matrix()), (Rational::one(), a2)])
        .expect("both matrices are (k+1)-square")
}

/// The sequence `A^{n+1}[i][j]` (1-based indices), recurring with the
/// characteristic polynomial of `A`.
pub fn matrix_entry_lrs(a: &QMatrix, i: usize, j: usize) -> Result<Lrs, ReductionError> {
    let k = a.rows();
    if !a.is_square() || i == 0 || j == 0 || i > k || j > k {
        return Err(ReductionError::EntryOutOfRange(i, j));
    }
    let p = a.char_poly().expect("square");
    let mut initial = Vec::with_capacity(k);
    let mut pw = a.clone();
    for step in 0..k {
        if step > 0 {
            pw = pw.mul(a);
        }
        initial.push(pw.get(i - 1, j - 1).clone());
    }
    Ok(Lrs::from_char_poly(&p, initial).expect("k ≥ 1"))
}

/// All `k²` entry sequences interleaved row-major:
/// `v_{r·k² + s·k + t} = A^{r+1}[s+1][t+1]`.
pub fn matrix_to_interleaved_lrs(a: &QMatrix) -> Lrs {
    let k = a.rows();
    let entries: Vec<(usize, usize)> = (1..=k).flat_map(|s| (1..=k).map(move |t| (s, t))).collect();
    interleave_entries(a, &entries).expect("valid entries")
}

fn interleave_entries(a: &QMatrix, entries: &[(usize, usize)]) -> Result<Lrs, ReductionError> {
    let seqs = entries
        .iter()
        .map(|&(i, j)| matrix_entry_lrs(a, i, j))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Lrs::interleave(&seqs).expect("entry sequences share the characteristic polynomial"))
}

/// One sequence whose terms run through every entry of `Σ w_i A_i^{n}`:
/// `a⋆_{r·k² + s·k + t} = Σ_i w_i A_i^{r+1}[s+1][t+1]`.
pub fn somset_to_lrs(set: &WeightedMatrixSet) -> Lrs {
    let k = set.k;
    let entries: Vec<(usize, usize)> = (1..=k).flat_map(|s| (1..=k).map(move |t| (s, t))).collect();
    entry_subset_lrs(set, &entries).expect("valid entries")
}

/// As `somset_to_lrs`, interleaving only the chosen (1-based) entries.
pub fn entry_subset_lrs(set: &WeightedMatrixSet, entries: &[(usize, usize)]) -> Result<Lrs, ReductionError> {
    if entries.is_empty() {
        return Err(ReductionError::EmptySelection);
    }
    let mut acc: Option<Lrs> = None;
    for (w, a) in &set.pairs {
        let part = interleave_entries(a, entries)?.scale(w);
        acc = Some(match acc {
            None => part,
            Some(prev) => prev.sum(&part),
        });
    }
    Ok(acc.expect("nonempty set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::exact::QPoly;

    fn paper_lrs() -> Lrs {
        Lrs::from_ints(&[2, -1], &[-1, 0]).unwrap()
    }

    #[test]
    fn power_sums() {
        let id = WeightedMatrixSet::from_ints(&[(1, QMatrix::identity(2))]).unwrap();
        assert_eq!(id.weighted_power_sum(5).unwrap(), QMatrix::identity(2));
        let s = WeightedMatrixSet::from_ints(&[(1, QMatrix::identity(2).scale(&rat(2))), (-1, QMatrix::identity(2))]).unwrap();
        assert_eq!(s.weighted_power_sum(3).unwrap(), QMatrix::from_ints(&[[7, 0], [0, 7]]));
        assert_eq!(s.weighted_power_sum(0), Err(ReductionError::ZeroPower));
        let red = unnlrs_to_ennsom(&paper_lrs());
        assert_eq!(red.weighted_power_sum(2).unwrap().row(0), &[rat(0), rat(1), rat(0)]);
        assert_eq!(s.power_sums_prefix(3)[2], s.weighted_power_sum(3).unwrap());
    }

    #[test]
    fn nonnegativity_reduction_shape() {
        let red = unnlrs_to_ennsom(&paper_lrs());
        assert_eq!(red.pairs()[1].1.block(1, 1, 2, 2), QMatrix::from_ints(&[[2, 1], [2, 0]]));
        let red = unnlrs_to_ennsom(&Lrs::from_ints(&[3], &[1]).unwrap());
        assert_eq!(red.pairs()[0].1, QMatrix::from_ints(&[[0, 1], [0, 3]]));
        assert_eq!(red.pairs()[1].1, QMatrix::from_ints(&[[0, 0], [0, 3]]));
    }

    #[test]
    fn positivity_reduction_shape() {
        let red = uplrs_to_epsom(&paper_lrs());
        let a2 = &red.pairs()[1].1;
        assert_eq!(a2.block(1, 1, 2, 2), QMatrix::from_ints(&[[3, 3], [3, 3]]));
        assert_eq!(a2.row(0), &[rat(1), rat(0), rat(0)]);
        assert_eq!(a2.block(0, 0, 3, 1), QMatrix::from_ints(&[[1], [1], [1]]));
    }

    #[test]
    fn entry_sequences() {
        let m = QMatrix::from_ints(&[[2, 1], [-1, 0]]);
        let l = matrix_entry_lrs(&m, 1, 1).unwrap();
        assert_eq!(l.coeffs(), &[rat(2), rat(-1)]);
        assert_eq!(l.terms(4), [2, 3, 4, 5].map(rat).to_vec());
        assert!(matrix_entry_lrs(&QMatrix::identity(2), 1, 2).unwrap().is_zero());
        assert_eq!(matrix_entry_lrs(&m, 3, 1), Err(ReductionError::EntryOutOfRange(3, 1)));

        let fig = QMatrix::from_ints(&[[5, 12, -6], [-3, -10, 6], [-3, -12, 8]]);
        let l = matrix_entry_lrs(&fig, 1, 1).unwrap();
        assert_eq!(l.coeffs(), &[rat(3), rat(0), rat(-4)]);
        let (a2, a3) = (fig.pow(2), fig.pow(3));
        assert_eq!(l.initial(), &[rat(5), a2.get(0, 0).clone(), a3.get(0, 0).clone()]);
    }

    #[test]
    fn interleaved_matrix_sequence() {
        let l = matrix_to_interleaved_lrs(&QMatrix::from_ints(&[[3]]));
        assert_eq!(l.terms(3), [3, 9, 27].map(rat).to_vec());
        let m = QMatrix::from_ints(&[[2, 1], [-1, 0]]);
        let l = matrix_to_interleaved_lrs(&m);
        assert_eq!(l.order(), 8);
        assert_eq!(l.char_poly(), QPoly::from_ints(&[-1, 0, 0, 0, 1]).pow(2));
        let t = l.terms(40);
        for r in 0..10 {
            assert_eq!(t[r * 4 + 2], rat(-(r as i64 + 1)));
        }
    }

    #[test]
    fn set_sequences() {
        let id = WeightedMatrixSet::from_ints(&[(1, QMatrix::identity(2))]).unwrap();
        assert_eq!(somset_to_lrs(&id).terms(8), [1, 0, 0, 1, 1, 0, 0, 1].map(rat).to_vec());
        let s = WeightedMatrixSet::from_ints(&[(1, QMatrix::from_ints(&[[2]])), (-1, QMatrix::from_ints(&[[1]]))]).unwrap();
        assert_eq!(somset_to_lrs(&s).terms(4), [1, 3, 7, 15].map(rat).to_vec());

        let single = WeightedMatrixSet::from_ints(&[(1, QMatrix::from_ints(&[[2, 1], [-1, 0]]))]).unwrap();
        assert_eq!(entry_subset_lrs(&single, &[(1, 1)]).unwrap().terms(4), [2, 3, 4, 5].map(rat).to_vec());
        assert_eq!(
            entry_subset_lrs(&single, &[(1, 2), (2, 1)]).unwrap().terms(6),
            [1, -1, 2, -2, 3, -3].map(rat).to_vec()
        );
        assert_eq!(entry_subset_lrs(&single, &[]), Err(ReductionError::EmptySelection));
        let all: Vec<(usize, usize)> = vec![(1, 1), (1, 2), (2, 1), (2, 2)];
        assert_eq!(entry_subset_lrs(&single, &all).unwrap(), somset_to_lrs(&single));
    }

    #[test]
    fn reduction_set_sequence_matches_power_sums() {
        let red = unnlrs_to_ennsom(&paper_lrs());
        let star = somset_to_lrs(&red);
        let t = star.terms(9 * 12);
        let sums = red.power_sums_prefix(12);
        for r in 0..12 {
            for s in 0..3 {
                for c in 0..3 {
                    assert_eq!(t[9 * r + 3 * s + c], *sums[r].get(s, c));
                }
            }
        }
    }

    #[test]
    fn json_form() {
        let s = WeightedMatrixSet::new(vec![(rat(1) / rat(2), QMatrix::identity(1))]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"k":1,"pairs":[{"weight":"1/2","matrix":[["1"]]}]}"#);
        assert_eq!(serde_json::from_str::<WeightedMatrixSet>(&text).unwrap(), s);
        assert!(serde_json::from_str::<WeightedMatrixSet>(r#"{"k":1,"pairs":[]}"#).is_err());
    }
}
