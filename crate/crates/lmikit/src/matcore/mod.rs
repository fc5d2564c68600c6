//! Dense real linear algebra foundation.
//!
//! Everything here operates on [`DenseMatrix`], a row-major `f64` matrix.
//! Matrices with zero rows or columns are legal; they show up when stacking
//! pure-feedthrough weight blocks.

mod eig;
mod svd;
mod schur;
mod lyap;

pub use eig::{eigenvalues, symeig, Complex};
pub use svd::{nullspace_basis, pinv, rank, sigma_max, sigma_min, svd, Svd};
pub use schur::{real_schur, reorder_schur_stable_first, schur_eigenvalues};
pub use lyap::{
    coupling_factorization, lyapunov_residual, solve_care_stabilizing, solve_lyapunov, Domain,
};

use crate::{Error, Result};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense real matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:>12.6} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Identity scaled by `s`.
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length mismatch");
        Self { rows, cols, data }
    }

    pub fn column(v: &[f64]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn row(v: &[f64]) -> Self {
        Self::from_vec(1, v.len(), v.to_vec())
    }

    pub fn scalar(v: f64) -> Self {
        Self::from_vec(1, 1, vec![v])
    }

    pub fn diag(v: &[f64]) -> Self {
        let mut m = Self::zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product `tr(AᵀB)`.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym_part(&self) -> Self {
        assert!(self.is_square());
        let mut s = Self::zeros(self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.set(r, c, 0.5 * (self.get(r, c) + self.get(c, r)));
            }
        }
        s
    }

    /// Skew-symmetric part `(A - Aᵀ)/2`.
    pub fn skew_part(&self) -> Self {
        assert!(self.is_square());
        let mut s = Self::zeros(self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.set(r, c, 0.5 * (self.get(r, c) - self.get(c, r)));
            }
        }
        s
    }

    pub fn max_asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut m = 0.0_f64;
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                m = m.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        m
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, sub: &Self) {
        assert!(r0 + sub.rows <= self.rows && c0 + sub.cols <= self.cols);
        for r in 0..sub.rows {
            for c in 0..sub.cols {
                self.set(r0 + r, c0 + c, sub.get(r, c));
            }
        }
    }

    pub fn column_vec(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Self]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "row count mismatch in hstack");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            m.set_submatrix(0, off, b);
            off += b.cols;
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&Self]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols), "column count mismatch in vstack");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            m.set_submatrix(off, 0, b);
            off += b.rows;
        }
        m
    }

    /// Assemble a block matrix from a grid; all blocks in a row must share
    /// height and all blocks in a column must share width.
    pub fn block(grid: &[Vec<&Self>]) -> Self {
        let rows: Vec<Self> = grid.iter().map(|r| Self::hstack(r)).collect();
        Self::vstack(&rows.iter().collect::<Vec<_>>())
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_submatrix(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0.0;
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Column-stacking vectorization (standard `vec`).
    pub fn vectorize(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                v.push(self.get(r, c));
            }
        }
        v
    }

    pub fn from_vectorized(rows: usize, cols: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        let mut k = 0;
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, v[k]);
                k += 1;
            }
        }
        m
    }
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<f64> = (0..self.cols).map(|c| self.get(r, c)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct MatVisitor;
        impl<'de> Visitor<'de> for MatVisitor {
            type Value = DenseMatrix;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of equal-length numeric rows")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<DenseMatrix, A::Error> {
                let mut rows: Vec<Vec<f64>> = Vec::new();
                while let Some(row) = seq.next_element::<Vec<f64>>()? {
                    if let Some(first) = rows.first() {
                        if first.len() != row.len() {
                            return Err(de::Error::custom("ragged matrix rows"));
                        }
                    }
                    rows.push(row);
                }
                Ok(DenseMatrix::from_rows(&rows))
            }
        }
        deserializer.deserialize_seq(MatVisitor)
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add dims");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub dims");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "mul dims {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }
}

/// Symmetric matrix; construction symmetrizes via `(S + Sᵀ)/2` and rejects
/// inputs whose asymmetry exceeds `1e-12 · max(1, ‖S‖_F)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix(DenseMatrix);

impl SymmetricMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("symmetric matrix entries".into()));
        }
        let tol = 1e-12 * m.frob_norm().max(1.0);
        let dev = if m.rows() == 0 { 0.0 } else { m.max_asymmetry() };
        if dev > tol {
            return Err(Error::NotSymmetric { max_deviation: dev, tolerance: tol });
        }
        Ok(Self(m.sym_part()))
    }

    /// Symmetrize without the asymmetry check; for internal averaging steps.
    pub fn symmetrize(m: &DenseMatrix) -> Self {
        Self(m.sym_part())
    }

    pub fn identity(n: usize) -> Self {
        Self(DenseMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DenseMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_mat(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_mat(self) -> DenseMatrix {
        self.0
    }

    /// Smallest eigenvalue.
    pub fn min_eig(&self) -> Result<f64> {
        let (vals, _) = symeig(self)?;
        Ok(vals.first().copied().unwrap_or(0.0))
    }

    /// Largest eigenvalue.
    pub fn max_eig(&self) -> Result<f64> {
        let (vals, _) = symeig(self)?;
        Ok(vals.last().copied().unwrap_or(0.0))
    }

    /// Symmetric square root via the spectral decomposition; requires PSD.
    pub fn sqrt_psd(&self) -> Result<DenseMatrix> {
        let (vals, vecs) = symeig(self)?;
        let tol = 1e-12 * vals.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let mut d = DenseMatrix::zeros(self.dim(), self.dim());
        for (i, &v) in vals.iter().enumerate() {
            if v < -tol {
                return Err(Error::NotPositiveDefinite(format!("eigenvalue {v:.3e} in sqrt")));
            }
            d.set(i, i, v.max(0.0).sqrt());
        }
        Ok(&(&vecs * &d) * &vecs.transpose())
    }
}

/// Cholesky factorization `S = L Lᵀ`; `None` when not positive definite.
pub fn cholesky(s: &DenseMatrix) -> Option<DenseMatrix> {
    assert!(s.is_square());
    let n = s.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = s.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l.set(j, j, dj);
        for i in (j + 1)..n {
            let mut v = s.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / dj);
        }
    }
    Some(l)
}

/// Solve `L x = b` for lower-triangular `L`.
pub fn forward_substitute(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l.get(i, k) * x[k];
        }
        x[i] /= l.get(i, i);
    }
    x
}

/// Solve `Lᵀ x = b` for lower-triangular `L`.
pub fn back_substitute_lt(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            x[i] -= l.get(k, i) * x[k];
        }
        x[i] /= l.get(i, i);
    }
    x
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// Largest |pivot| seen, for conditioning checks.
    max_pivot: f64,
    min_pivot: f64,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("LU of non-square matrix".into()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut max_pivot = 0.0_f64;
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let mut best = col;
            let mut best_val = lu.get(col, col).abs();
            for r in (col + 1)..n {
                let v = lu.get(r, col).abs();
                if v > best_val {
                    best = r;
                    best_val = v;
                }
            }
            if best != col {
                for c in 0..n {
                    let a = lu.get(col, c);
                    let b = lu.get(best, c);
                    lu.set(col, c, b);
                    lu.set(best, c, a);
                }
                perm.swap(col, best);
                sign = -sign;
            }
            let piv = lu.get(col, col);
            max_pivot = max_pivot.max(piv.abs());
            min_pivot = min_pivot.min(piv.abs());
            if piv == 0.0 {
                continue; // singular; detected by callers through min_pivot
            }
            for r in (col + 1)..n {
                let f = lu.get(r, col) / piv;
                lu.set(r, col, f);
                for c in (col + 1)..n {
                    lu.add_at(r, c, -f * lu.get(col, c));
                }
            }
        }
        if n == 0 {
            min_pivot = 1.0;
            max_pivot = 1.0;
        }
        Ok(Self { lu, perm, sign, max_pivot, min_pivot })
    }

    pub fn is_singular(&self, rel_tol: f64) -> bool {
        self.min_pivot <= rel_tol * self.max_pivot.max(1e-300)
    }

    /// Rough condition estimate `max|pivot| / min|pivot|`.
    pub fn pivot_ratio(&self) -> f64 {
        if self.min_pivot == 0.0 {
            f64::INFINITY
        } else {
            self.max_pivot / self.min_pivot
        }
    }

    pub fn det(&self) -> f64 {
        let n = self.lu.rows();
        let mut d = self.sign;
        for i in 0..n {
            d *= self.lu.get(i, i);
        }
        d
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch("LU solve rhs length".into()));
        }
        if self.min_pivot == 0.0 {
            return Err(Error::Singular("zero pivot in LU solve".into()));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu.get(i, k) * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.lu.get(i, k) * x[k];
            }
            x[i] /= self.lu.get(i, i);
        }
        Ok(x)
    }

    pub fn solve_mat(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch("LU solve rhs rows".into()));
        }
        let mut out = DenseMatrix::zeros(n, b.cols());
        for c in 0..b.cols() {
            let col = self.solve_vec(&b.column_vec(c))?;
            for r in 0..n {
                out.set(r, c, col[r]);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve_mat(&DenseMatrix::identity(self.lu.rows()))
    }

    /// Unpack `P A = L U` as `(p, l, u)` where row `i` of `A` maps to row
    /// `perm[i]`... concretely `A = Pᵀ L U` with `P` the permutation that
    /// reorders rows as `perm`.
    pub fn unpack(&self) -> (Vec<usize>, DenseMatrix, DenseMatrix) {
        let n = self.lu.rows();
        let mut l = DenseMatrix::identity(n);
        let mut u = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if c < r {
                    l.set(r, c, self.lu.get(r, c));
                } else {
                    u.set(r, c, self.lu.get(r, c));
                }
            }
        }
        (self.perm.clone(), l, u)
    }
}

/// Solve `A X = B` via LU with a singularity check.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = Lu::new(a)?;
    if lu.is_singular(1e-14) {
        return Err(Error::Singular("coefficient matrix in solve".into()));
    }
    lu.solve_mat(b)
}

/// Matrix inverse via LU.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    solve(a, &DenseMatrix::identity(a.rows()))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let s = a.get(ar, ac);
            if s == 0.0 {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.set(ar * b.rows() + br, ac * b.cols() + bc, s * b.get(br, bc));
                }
            }
        }
    }
    out
}

/// Threshold used everywhere a numerical rank decision is made:
/// `σ ≤ 1e-10 · σ_max · max(rows, cols)`.
pub fn rank_threshold(sigma_max: f64, rows: usize, cols: usize) -> f64 {
    1e-10 * sigma_max * rows.max(cols) as f64
}
