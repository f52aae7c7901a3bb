//! Dense rational matrices.

use super::poly::QPoly;
use super::rational::{format_rational, parse_rational, rat, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry grid has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("index ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<QMatrix, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::BadShape {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<QMatrix, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::BadShape {
                    expected: r * c,
                    got: data.len() + row.len(),
                });
            }
            data.extend(row);
        }
        QMatrix::new(r, c, data)
    }

    /// Convenience constructor for integer fixtures. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| rat(v)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn zero(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> QMatrix {
        let mut m = QMatrix::zero(k, k);
        for i in 0..k {
            m.data[i * k + i] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> QMatrix {
        let k = entries.len();
        let mut m = QMatrix::zero(k, k);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * k + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn checked_get(&self, i: usize, j: usize) -> Result<&Rational, MatrixError> {
        if i >= self.rows || j >= self.cols {
            return Err(MatrixError::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.get(i, j))
    }

    fn require_square(&self) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn mismatch(&self, other: &QMatrix) -> MatrixError {
        MatrixError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &QMatrix) -> Result<QMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product of matrices whose shapes are already known to agree.
    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        self.mat_mul(other).expect("matrix shapes agree")
    }

    pub fn mat_pow(&self, n: u64) -> Result<QMatrix, MatrixError> {
        self.require_square()?;
        let mut result = QMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    pub fn pow(&self, n: u64) -> QMatrix {
        self.mat_pow(n).expect("square matrix")
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix, MatrixError> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|a| a.is_positive())
    }

    /// Characteristic polynomial `det(xI − A)`, monic, by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Result<QPoly, MatrixError> {
        Ok(self.char_poly_with_adjugate()?.0)
    }

    /// Characteristic polynomial together with the matrices `B_1 … B_k` such
    /// that `adj(xI − A) = Σ_j B_j x^{k−j}`.
    pub fn char_poly_with_adjugate(&self) -> Result<(QPoly, Vec<QMatrix>), MatrixError> {
        self.require_square()?;
        let k = self.rows;
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        let mut bs = Vec::with_capacity(k);
        let mut m = QMatrix::zero(k, k);
        for j in 1..=k {
            // M_j = A·M_{j−1} + c_{k−j+1}·I
            let mut next = self.mul(&m);
            for i in 0..k {
                next.data[i * k + i] += &c[k - j + 1];
            }
            let am = self.mul(&next);
            c[k - j] = -am.trace() / rat(j as i64);
            bs.push(next.clone());
            m = next;
        }
        Ok((QPoly::new(c), bs))
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &QPoly) -> QMatrix {
        let k = self.rows;
        let mut acc = QMatrix::zero(k, k);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..k {
                acc.data[i * k + i] += c;
            }
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let k = self.rows;
        let mut aug = QMatrix::zero(k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, k + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < k || pivots[k - 1] >= k {
            return None;
        }
        let mut inv = QMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                inv.set(i, j, r.get(i, k + j).clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Result<Rational, MatrixError> {
        let p = self.char_poly()?;
        let c0 = p.coeff(0);
        Ok(if self.rows % 2 == 1 { -c0 } else { c0 })
    }

    pub fn mat_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &QMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> QMatrix {
        let mut out = QMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    /// Row-major nested string grid, the serialized form.
    pub fn to_string_grid(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.to_string_grid())
    }
}

impl<'de> serde::Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let grid = Vec::<Vec<String>>::deserialize(d)?;
        let rows = grid
            .iter()
            .map(|r| r.iter().map(|t| parse_rational(t).map_err(D::Error::custom)).collect())
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        QMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let m = QMatrix::from_ints(&[[2, 1], [-1, 0]]);
        assert_eq!(m.mul(&m), QMatrix::from_ints(&[[3, 2], [-2, -1]]));
        let a = QMatrix::from_ints(&[[1, 2], [3, 4]]);
        let swap = QMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(a.mul(&swap), QMatrix::from_ints(&[[2, 1], [4, 3]]));
        assert_eq!(QMatrix::identity(2).mul(&QMatrix::identity(2)), QMatrix::identity(2));
        assert!(a.mat_mul(&QMatrix::zero(3, 3)).is_err());
    }

    #[test]
    fn powers() {
        let m = QMatrix::from_ints(&[[2, 1], [-1, 0]]);
        assert_eq!(m.pow(5), QMatrix::from_ints(&[[6, 5], [-5, -4]]));
        assert_eq!(m.pow(0), QMatrix::identity(2));
        let swap = QMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(swap.pow(7), swap);
        assert!(QMatrix::zero(2, 3).mat_pow(2).is_err());
    }

    #[test]
    fn characteristic_polynomials() {
        let fig2 = QMatrix::from_ints(&[[5, 12, -6], [-3, -10, 6], [-3, -12, 8]]);
        assert_eq!(fig2.char_poly().unwrap(), QPoly::from_ints(&[4, 0, -3, 1]));
        assert_eq!(
            QMatrix::identity(2).char_poly().unwrap(),
            QPoly::from_ints(&[1, -2, 1])
        );
        let m = QMatrix::from_ints(&[[2, 1], [-1, 0]]);
        assert_eq!(m.char_poly().unwrap(), QPoly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn adjugate_identity() {
        // (xI − A)·adj(xI − A) = p(x)·I, checked at a few rational points.
        let a = QMatrix::from_ints(&[[1, 2, 0], [-1, 3, 4], [2, 0, -2]]);
        let (p, bs) = a.char_poly_with_adjugate().unwrap();
        for x in [rat(0), rat(2), rat(-3)] {
            let mut adj = QMatrix::zero(3, 3);
            for (j, b) in bs.iter().enumerate() {
                adj = adj.add(&b.scale(&x.pow((3 - 1 - j) as i32))).unwrap();
            }
            let xi_a = QMatrix::identity(3).scale(&x).sub(&a).unwrap();
            assert_eq!(xi_a.mul(&adj), QMatrix::identity(3).scale(&p.eval(&x)));
        }
    }

    #[test]
    fn inverse_and_nullspace() {
        let a = QMatrix::from_ints(&[[2, 1], [1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), QMatrix::identity(2));
        let s = QMatrix::from_ints(&[[1, 2], [2, 4]]);
        assert!(s.inverse().is_none());
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mat_vec(&ns[0]).iter().all(|v| v.is_zero()));
        assert_eq!(a.determinant().unwrap(), rat(1));
    }
}
