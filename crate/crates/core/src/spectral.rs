//! Exact spectral classification and eigendecomposition.
//!
//! Eigenvectors are computed once per squarefree factor `m` of the
//! characteristic polynomial, as vectors over `Q[x]/m` with `x` standing for
//! the eigenvalue. Every root of `m` gets its eigenvectors by evaluating the
//! same polynomials there, so conjugate eigenvalues automatically get
//! entrywise conjugate rows and real eigenvalues get real rows. Elimination
//! never factors `m`: a pivot that is a zero divisor splits `m` and the
//! computation restarts on each factor.

use crate::algebraic::field::{ComplexAlgebraic, FieldElement};
use crate::algebraic::field::trace_mod;
use crate::algebraic::roots::RootSet;
use crate::exact::rational::Rational;
use crate::exact::{QMatrix, QPoly};
use crate::expsum::ExponentialSum;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectralClass {
    Simple,
    DiagonalizableNotSimple,
    Defective,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not diagonalizable")]
    Defective,
}

pub fn minimal_poly(a: &QMatrix) -> QPoly {
    assert!(a.is_square(), "minimal polynomial of a non-square matrix");
    let k = a.rows();
    let mut powers = vec![QMatrix::identity(k)];
    loop {
        let d = powers.len();
        let next = powers[d - 1].mul(a);
        powers.push(next);
        // columns are vec(A^0), …, vec(A^d)
        let mut m = QMatrix::zero(k * k, d + 1);
        for (j, p) in powers.iter().enumerate() {
            for (i, v) in p.entries().iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        if let Some(v) = m.nullspace().into_iter().next() {
            // the first dependence involves A^d with a nonzero coefficient
            return QPoly::new(v).monic();
        }
    }
}

pub fn classify(a: &QMatrix) -> Result<SpectralClass, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let cp = a.char_poly().map_err(|_| SpectralError::NotSquare)?;
    Ok(if cp.is_squarefree() {
        SpectralClass::Simple
    } else if minimal_poly(a).is_squarefree() {
        SpectralClass::DiagonalizableNotSimple
    } else {
        SpectralClass::Defective
    })
}

/// Result of a computation over `Q[x]/m` that either finishes or finds a
/// nontrivial factor of `m`.
enum Modular<T> {
    Done(T),
    Split(QPoly),
}

/// Runs `f` over `m`, splitting and restarting whenever it hits a zero
/// divisor. Returns one result per factor in the final splitting.
fn split_solve<T>(m: &QPoly, f: impl Fn(&QPoly) -> Modular<T>) -> Vec<(QPoly, T)> {
    let mut stack = vec![m.monic()];
    let mut out = Vec::new();
    while let Some(m) = stack.pop() {
        match f(&m) {
            Modular::Done(t) => out.push((m, t)),
            Modular::Split(g) => {
                let g = g.monic();
                stack.push(m.exact_div(&g).monic());
                stack.push(g);
            }
        }
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    out
}

fn unit_inverse(a: &QPoly, m: &QPoly) -> Modular<QPoly> {
    let (g, s, _) = a.ext_gcd(m);
    if g.is_constant() {
        Modular::Done(s.scale(&g.coeff(0).recip()).rem(m))
    } else {
        Modular::Split(g)
    }
}

type PolyMatrix = Vec<Vec<QPoly>>;

/// Gauss–Jordan elimination of `rows` over `Q[x]/m`. Returns the reduced rows
/// and pivot columns.
fn rref_mod(mut rows: PolyMatrix, m: &QPoly) -> Modular<(PolyMatrix, Vec<usize>)> {
    let ncols = rows.first().map_or(0, |r| r.len());
    for row in rows.iter_mut() {
        for e in row.iter_mut() {
            *e = e.rem(m);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let mut choice = None;
        let mut divisor = None;
        for i in r..rows.len() {
            let e = &rows[i][c];
            if e.is_zero() {
                continue;
            }
            match unit_inverse(e, m) {
                Modular::Done(inv) => {
                    choice = Some((i, inv));
                    break;
                }
                Modular::Split(g) => divisor = divisor.or(Some(g)),
            }
        }
        let (i, inv) = match (choice, divisor) {
            (Some(found), _) => found,
            (None, Some(g)) => return Modular::Split(g),
            (None, None) => continue,
        };
        rows.swap(r, i);
        rows[r] = rows[r].iter().map(|e| (e * &inv).rem(m)).collect();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let pivot_row = rows[r].clone();
            for (e, p) in rows[i].iter_mut().zip(pivot_row.iter()) {
                *e = (&*e - &(&f * p)).rem(m);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Modular::Done((rows, pivots))
}

fn nullspace_mod(rows: PolyMatrix, m: &QPoly) -> Modular<PolyMatrix> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let (red, pivots) = match rref_mod(rows, m) {
        Modular::Done(x) => x,
        Modular::Split(g) => return Modular::Split(g),
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![QPoly::zero(); ncols];
        v[free] = QPoly::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&red[r][free];
        }
        basis.push(v);
    }
    Modular::Done(basis)
}

fn inverse_mod(a: &PolyMatrix, m: &QPoly) -> Modular<PolyMatrix> {
    let n = a.len();
    let aug: PolyMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { QPoly::one() } else { QPoly::zero() }));
            r
        })
        .collect();
    match rref_mod(aug, m) {
        Modular::Done((red, pivots)) => {
            assert!(pivots.len() == n && pivots[n - 1] == n - 1, "singular pairing matrix");
            Modular::Done(red.into_iter().map(|r| r[n..].to_vec()).collect())
        }
        Modular::Split(g) => Modular::Split(g),
    }
}

/// `A − x·I` (or its transpose) as a matrix over `Q[x]`.
fn shifted(a: &QMatrix, transpose: bool) -> PolyMatrix {
    let k = a.rows();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let v = if transpose { a.get(j, i) } else { a.get(i, j) };
                    let c = QPoly::constant(v.clone());
                    if i == j {
                        &c - &QPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// Eigenvalues sharing one squarefree factor `m` of the characteristic
/// polynomial, all of multiplicity `multiplicity`. With `x` the eigenvalue,
/// `rows[l]` are left eigenvectors and `cols[l]` right eigenvectors, paired so
/// that `rows[l]·cols[l'] = δ_{ll'}`.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub modulus: QPoly,
    pub roots: Arc<RootSet>,
    pub multiplicity: usize,
    pub rows: PolyMatrix,
    pub cols: PolyMatrix,
}

impl EigenBlock {
    /// The projector onto the eigenspace, `Σ_l cols[l]·rows[l]ᵀ`, entry `(p, q)`
    /// (0-based), as an element of `Q[x]/m`.
    pub fn projector_entry(&self, p: usize, q: usize) -> QPoly {
        let mut acc = QPoly::zero();
        for (c, r) in self.cols.iter().zip(self.rows.iter()) {
            acc = &acc + &(&c[p] * &r[q]);
        }
        acc.rem(&self.modulus)
    }
}

/// One α-segment: the positions `offset .. offset + multiplicity` of `D`
/// holding the root `root` of block `block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub block: usize,
    pub root: usize,
    pub multiplicity: usize,
    pub offset: usize,
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    dim: usize,
    blocks: Vec<EigenBlock>,
    segments: Vec<Segment>,
    sigma: Vec<usize>,
}

fn block_solve(a: &QMatrix, m: &QPoly, rho: usize) -> Modular<(PolyMatrix, PolyMatrix)> {
    let left = match nullspace_mod(shifted(a, true), m) {
        Modular::Done(v) => v,
        Modular::Split(g) => return Modular::Split(g),
    };
    let right = match nullspace_mod(shifted(a, false), m) {
        Modular::Done(v) => v,
        Modular::Split(g) => return Modular::Split(g),
    };
    assert_eq!(left.len(), rho, "geometric multiplicity differs from algebraic");
    assert_eq!(right.len(), rho, "geometric multiplicity differs from algebraic");
    let dot = |u: &[QPoly], v: &[QPoly]| {
        u.iter().zip(v).fold(QPoly::zero(), |acc, (x, y)| &acc + &(x * y)).rem(m)
    };
    let gram: PolyMatrix = left.iter().map(|r| right.iter().map(|c| dot(r, c)).collect()).collect();
    let ginv = match inverse_mod(&gram, m) {
        Modular::Done(g) => g,
        Modular::Split(g) => return Modular::Split(g),
    };
    // cols' = C·G⁻¹, so that R·cols' = I
    let k = a.rows();
    let cols: PolyMatrix = (0..rho)
        .map(|l| {
            (0..k)
                .map(|p| {
                    (0..rho)
                        .fold(QPoly::zero(), |acc, t| &acc + &(&right[t][p] * &ginv[t][l]))
                        .rem(m)
                })
                .collect()
        })
        .collect();
    Modular::Done((left, cols))
}

/// Eigenvector blocks for the roots of `f`, a squarefree factor of the
/// characteristic polynomial whose roots all have geometric and algebraic
/// multiplicity `rho`. The rest of the spectrum may be defective.
pub fn eigenspace_blocks(a: &QMatrix, f: &QPoly, rho: usize) -> Vec<EigenBlock> {
    split_solve(f, |m| block_solve(a, m, rho))
        .into_iter()
        .map(|(m, (rows, cols))| {
            let roots = Arc::new(RootSet::new(&m));
            EigenBlock { modulus: m, roots, multiplicity: rho, rows, cols }
        })
        .collect()
}

/// Sort key of a segment: descending multiplicity, then the eigenvalue's
/// real part, then `|Im|`, with the positive-imaginary member of a conjugate
/// pair first.
fn segment_key(rs: &RootSet, root: usize, rho: usize) -> (usize, Rational, Rational, bool) {
    let (re, im) = rs.enclosure(root, 64).mid();
    let negative = !rs.is_real(root) && im.is_negative();
    (usize::MAX - rho, re, im.abs(), negative)
}

pub fn eigendecompose(a: &QMatrix) -> Result<EigenDecomposition, SpectralError> {
    if classify(a)? == SpectralClass::Defective {
        return Err(SpectralError::Defective);
    }
    let k = a.rows();
    let cp = a.char_poly().map_err(|_| SpectralError::NotSquare)?;
    let mut blocks = Vec::new();
    for (i, f) in cp.squarefree_decomposition().iter().enumerate() {
        if f.deg() == 0 {
            continue;
        }
        blocks.extend(eigenspace_blocks(a, f, i + 1));
    }

    let mut keyed: Vec<((usize, Rational, Rational, bool), usize, usize)> = Vec::new();
    for (b, blk) in blocks.iter().enumerate() {
        for r in 0..blk.roots.len() {
            keyed.push((segment_key(&blk.roots, r, blk.multiplicity), b, r));
        }
    }
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    let mut segments = Vec::new();
    let mut offset = 0;
    for (_, b, r) in keyed {
        let rho = blocks[b].multiplicity;
        segments.push(Segment { block: b, root: r, multiplicity: rho, offset });
        offset += rho;
    }
    assert_eq!(offset, k);

    let mut sigma = vec![0; k];
    for s in &segments {
        let conj = blocks[s.block].roots.conjugate(s.root);
        let t = segments
            .iter()
            .find(|t| t.block == s.block && t.root == conj)
            .expect("conjugate segment");
        for l in 0..s.multiplicity {
            sigma[s.offset + l] = t.offset + l;
        }
    }

    let dec = EigenDecomposition { dim: k, blocks, segments, sigma };
    dec.verify(a);
    Ok(dec)
}

impl EigenDecomposition {
    /// Checks `Σ_α α·P_α = A` and `Σ_α P_α = I` through block traces.
    fn verify(&self, a: &QMatrix) {
        let k = self.dim;
        for p in 0..k {
            for q in 0..k {
                let mut ident = Rational::zero();
                let mut entry = Rational::zero();
                for blk in &self.blocks {
                    let e = blk.projector_entry(p, q);
                    ident += trace_mod(&e, &blk.modulus);
                    entry += trace_mod(&(&e * &QPoly::x()), &blk.modulus);
                }
                let expect = if p == q { Rational::one() } else { Rational::zero() };
                assert_eq!(ident, expect, "eigenvectors do not resolve the identity");
                assert_eq!(&entry, a.get(p, q), "eigendecomposition does not reconstruct A");
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_offsets(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.offset).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.multiplicity).collect()
    }

    /// `σ_D` as a 0-based permutation of diagonal positions.
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Segment index and offset within it of diagonal position `i`.
    pub fn position(&self, i: usize) -> (usize, usize) {
        let s = self
            .segments
            .iter()
            .rposition(|s| s.offset <= i)
            .expect("position in range");
        (s, i - self.segments[s].offset)
    }

    pub fn eigenvalue(&self, segment: usize) -> ComplexAlgebraic {
        let s = &self.segments[segment];
        ComplexAlgebraic::from_root(&self.blocks[s.block].roots, s.root)
    }

    pub fn eigenvalues(&self) -> Vec<(ComplexAlgebraic, usize)> {
        (0..self.segments.len()).map(|s| (self.eigenvalue(s), self.segments[s].multiplicity)).collect()
    }

    fn embed(&self, segment: usize, rep: &QPoly) -> FieldElement {
        let s = &self.segments[segment];
        FieldElement::embedded(&self.blocks[s.block].roots, s.root, rep)
    }

    pub fn d_entry(&self, i: usize) -> FieldElement {
        let (s, _) = self.position(i);
        self.embed(s, &QPoly::x())
    }

    /// `S[p, i]` (0-based).
    pub fn s_entry(&self, p: usize, i: usize) -> FieldElement {
        let (s, l) = self.position(i);
        let blk = &self.blocks[self.segments[s].block];
        self.embed(s, &blk.cols[l][p])
    }

    /// `S⁻¹[i, q]` (0-based).
    pub fn s_inv_entry(&self, i: usize, q: usize) -> FieldElement {
        let (s, l) = self.position(i);
        let blk = &self.blocks[self.segments[s].block];
        self.embed(s, &blk.rows[l][q])
    }

    /// `Aⁿ[p, q]` (0-based) as an exponential sum valid for `n ≥ 1`.
    pub fn entry_sum(&self, p: usize, q: usize) -> ExponentialSum {
        self.blocks.iter().fold(ExponentialSum::zero(), |acc, blk| {
            acc.add(&ExponentialSum::from_trace_form(&blk.modulus, &blk.projector_entry(p, q)))
        })
    }

    /// `Aⁿ[p, q]` (0-based) as explicit `(coefficient, eigenvalue)` pairs valid
    /// for all `n ≥ 0`, zero coefficients dropped.
    pub fn entry_exponential_sum(&self, p: usize, q: usize) -> Vec<(ComplexAlgebraic, ComplexAlgebraic)> {
        let mut out = Vec::new();
        for (s, seg) in self.segments.iter().enumerate() {
            let c = self.embed(s, &self.blocks[seg.block].projector_entry(p, q));
            if c.is_zero_at_embedding() {
                continue;
            }
            out.push((c.to_complex(), self.eigenvalue(s)));
        }
        out
    }
}
