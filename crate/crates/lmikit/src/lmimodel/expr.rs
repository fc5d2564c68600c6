//! Block-structured affine matrix expressions.
//!
//! An expression is a constant matrix plus a list of affine terms, each of
//! the form `L·V·R`, `L·Vᵀ·R` (V a matrix variable) or `v·C` (v a scalar
//! variable). The grammar cannot produce variable–variable products, which is
//! what keeps everything downstream honestly affine; the one remaining trap,
//! multiplying two variable-bearing expressions, is rejected at runtime.

use super::{Assignment, LmiProblem, VarKind, VarRef};
use crate::matcore::DenseMatrix;
use crate::{Error, Result};
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Debug)]
pub(crate) enum Term {
    Matrix { var: VarRef, left: DenseMatrix, right: DenseMatrix, transposed: bool },
    ScalarMul { var: VarRef, coeff: DenseMatrix },
}

/// Affine matrix-valued expression in the declared variables.
#[derive(Clone, Debug)]
pub struct AffineExpr {
    rows: usize,
    cols: usize,
    constant: DenseMatrix,
    pub(crate) terms: Vec<Term>,
}

impl AffineExpr {
    pub fn constant(m: DenseMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), constant: m, terms: vec![] }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::constant(DenseMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(DenseMatrix::identity(n))
    }

    /// The variable itself (scalar variables come out as a 1×1 expression).
    pub fn var(v: VarRef) -> Self {
        match v.kind {
            VarKind::Scalar => Self {
                rows: 1,
                cols: 1,
                constant: DenseMatrix::zeros(1, 1),
                terms: vec![Term::ScalarMul { var: v, coeff: DenseMatrix::scalar(1.0) }],
            },
            kind => {
                let (r, c) = kind.shape();
                Self {
                    rows: r,
                    cols: c,
                    constant: DenseMatrix::zeros(r, c),
                    terms: vec![Term::Matrix {
                        var: v,
                        left: DenseMatrix::identity(r),
                        right: DenseMatrix::identity(c),
                        transposed: false,
                    }],
                }
            }
        }
    }

    /// The transposed variable `Vᵀ`.
    pub fn var_t(v: VarRef) -> Self {
        Self::var(v).t()
    }

    /// `v · C` for a scalar variable `v` and a constant coefficient matrix.
    pub fn scalar_times(v: VarRef, coeff: DenseMatrix) -> Self {
        assert!(matches!(v.kind, VarKind::Scalar), "scalar_times needs a scalar variable");
        Self {
            rows: coeff.rows(),
            cols: coeff.cols(),
            constant: DenseMatrix::zeros(coeff.rows(), coeff.cols()),
            terms: vec![Term::ScalarMul { var: v, coeff }],
        }
    }

    /// `v · I_n` for a scalar variable.
    pub fn scalar_times_identity(v: VarRef, n: usize) -> Self {
        Self::scalar_times(v, DenseMatrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn constant_part(&self) -> &DenseMatrix {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Left-multiply by a constant: `M · E`.
    pub fn lmul(&self, m: &DenseMatrix) -> Self {
        assert_eq!(m.cols(), self.rows, "lmul dims");
        Self {
            rows: m.rows(),
            cols: self.cols,
            constant: m * &self.constant,
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    Term::Matrix { var, left, right, transposed } => Term::Matrix {
                        var: *var,
                        left: m * left,
                        right: right.clone(),
                        transposed: *transposed,
                    },
                    Term::ScalarMul { var, coeff } => Term::ScalarMul { var: *var, coeff: m * coeff },
                })
                .collect(),
        }
    }

    /// Right-multiply by a constant: `E · M`.
    pub fn rmul(&self, m: &DenseMatrix) -> Self {
        assert_eq!(self.cols, m.rows(), "rmul dims");
        Self {
            rows: self.rows,
            cols: m.cols(),
            constant: &self.constant * m,
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    Term::Matrix { var, left, right, transposed } => Term::Matrix {
                        var: *var,
                        left: left.clone(),
                        right: right * m,
                        transposed: *transposed,
                    },
                    Term::ScalarMul { var, coeff } => Term::ScalarMul { var: *var, coeff: coeff * m },
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            constant: self.constant.scale(s),
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    Term::Matrix { var, left, right, transposed } => Term::Matrix {
                        var: *var,
                        left: left.scale(s),
                        right: right.clone(),
                        transposed: *transposed,
                    },
                    Term::ScalarMul { var, coeff } => {
                        Term::ScalarMul { var: *var, coeff: coeff.scale(s) }
                    }
                })
                .collect(),
        }
    }

    /// Transpose: `(L V R)ᵀ = Rᵀ Vᵀ Lᵀ`.
    pub fn t(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            constant: self.constant.transpose(),
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    Term::Matrix { var, left, right, transposed } => Term::Matrix {
                        var: *var,
                        left: right.transpose(),
                        right: left.transpose(),
                        transposed: !*transposed,
                    },
                    Term::ScalarMul { var, coeff } => {
                        Term::ScalarMul { var: *var, coeff: coeff.transpose() }
                    }
                })
                .collect(),
        }
    }

    /// `He{E} = E + Eᵀ`.
    pub fn he(&self) -> Self {
        assert_eq!(self.rows, self.cols, "He of non-square expression");
        self + &self.t()
    }

    /// `tr(L·V·R)` as a 1×1 affine expression (sum of row/column slices).
    pub fn trace_of(l: &DenseMatrix, v: VarRef, r: &DenseMatrix) -> Self {
        let k = l.rows();
        assert_eq!(r.cols(), k, "trace needs L·V·R square");
        let mut out = Self::zero(1, 1);
        for i in 0..k {
            let li = l.submatrix(i, 0, 1, l.cols());
            let ri = r.submatrix(0, i, r.rows(), 1);
            out = &out + &Self::var(v).lmul(&li).rmul(&ri);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Guard used where a product of two expressions would be formed: only a
    /// constant×affine product is affine.
    pub fn mul_expr(a: &AffineExpr, b: &AffineExpr) -> Result<AffineExpr> {
        if a.is_constant() {
            Ok(b.lmul(&a.constant))
        } else if b.is_constant() {
            Ok(a.rmul(&b.constant))
        } else {
            Err(Error::NonAffine("product of two variable expressions".into()))
        }
    }

    /// Evaluate at an assignment.
    pub fn eval(&self, at: &Assignment) -> Result<DenseMatrix> {
        let mut out = self.constant.clone();
        for t in &self.terms {
            match t {
                Term::Matrix { var, left, right, transposed } => {
                    let v = at
                        .get(*var)
                        .ok_or_else(|| Error::Precondition(format!("unassigned variable id {}", var.id)))?;
                    let vm = if *transposed { v.transpose() } else { v.clone() };
                    out = &out + &(&(left * &vm) * right);
                }
                Term::ScalarMul { var, coeff } => {
                    let v = at
                        .get(*var)
                        .ok_or_else(|| Error::Precondition(format!("unassigned variable id {}", var.id)))?;
                    out = &out + &coeff.scale(v.get(0, 0));
                }
            }
        }
        Ok(out)
    }

    /// Accumulate the coefficient matrices `∂E/∂xⱼ` into `out[j]` (indexed by
    /// the problem's global scalar layout).
    pub(crate) fn accumulate_gradients(&self, problem: &LmiProblem, out: &mut [DenseMatrix]) {
        for t in &self.terms {
            match t {
                Term::Matrix { var, left, right, transposed } => {
                    let offset = problem.var(var.id).offset;
                    for (b, basis) in LmiProblem::basis_matrices(var.kind).into_iter().enumerate() {
                        let contrib = if *transposed {
                            &(left * &basis.transpose()) * right
                        } else {
                            &(left * &basis) * right
                        };
                        out[offset + b] = &out[offset + b] + &contrib;
                    }
                }
                Term::ScalarMul { var, coeff } => {
                    let offset = problem.var(var.id).offset;
                    out[offset] = &out[offset] + coeff;
                }
            }
        }
    }

    /// Assemble a block grid of expressions into one expression. `Mirror`
    /// entries (the `∗` convention) are resolved to the transpose of the
    /// corresponding upper block at assembly time.
    pub fn block(grid: &[Vec<BlockEntry>]) -> Result<AffineExpr> {
        let nrows = grid.len();
        if nrows == 0 {
            return Ok(AffineExpr::zero(0, 0));
        }
        let ncols = grid[0].len();
        if grid.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged block grid".into()));
        }
        // Resolve Mirror entries first.
        let mut cells: Vec<Vec<Option<AffineExpr>>> = vec![vec![None; ncols]; nrows];
        for (i, row) in grid.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                match entry {
                    BlockEntry::E(e) => cells[i][j] = Some(e.clone()),
                    BlockEntry::Mirror => {
                        if i <= j {
                            return Err(Error::DimensionMismatch(
                                "mirror marker above the diagonal".into(),
                            ));
                        }
                        match &grid[j][i] {
                            BlockEntry::E(e) => cells[i][j] = Some(e.t()),
                            _ => {
                                return Err(Error::DimensionMismatch(
                                    "mirror marker must reference an explicit block".into(),
                                ))
                            }
                        }
                    }
                }
            }
        }
        // Consistent row heights / column widths.
        let mut row_h = vec![0usize; nrows];
        let mut col_w = vec![0usize; ncols];
        for i in 0..nrows {
            for j in 0..ncols {
                let e = cells[i][j].as_ref().unwrap();
                if row_h[i] == 0 {
                    row_h[i] = e.rows();
                } else if row_h[i] != e.rows() {
                    return Err(Error::DimensionMismatch(format!(
                        "block row {i} height mismatch ({} vs {})",
                        row_h[i],
                        e.rows()
                    )));
                }
                if col_w[j] == 0 {
                    col_w[j] = e.cols();
                } else if col_w[j] != e.cols() {
                    return Err(Error::DimensionMismatch(format!(
                        "block column {j} width mismatch ({} vs {})",
                        col_w[j],
                        e.cols()
                    )));
                }
            }
        }
        let total_r: usize = row_h.iter().sum();
        let total_c: usize = col_w.iter().sum();
        let mut out = AffineExpr::zero(total_r, total_c);
        let mut r0 = 0;
        for i in 0..nrows {
            let mut c0 = 0;
            for j in 0..ncols {
                let e = cells[i][j].take().unwrap();
                // Embed via selector matrices: P (total_r × block_r) injects
                // rows, Q (block_c × total_c) injects columns.
                let mut p = DenseMatrix::zeros(total_r, e.rows());
                for k in 0..e.rows() {
                    p.set(r0 + k, k, 1.0);
                }
                let mut q = DenseMatrix::zeros(e.cols(), total_c);
                for k in 0..e.cols() {
                    q.set(k, c0 + k, 1.0);
                }
                out = &out + &e.lmul(&p).rmul(&q);
                c0 += col_w[j];
            }
            r0 += row_h[i];
        }
        Ok(out)
    }

    /// Block-diagonal concatenation of expressions.
    pub fn block_diag(entries: &[AffineExpr]) -> Result<AffineExpr> {
        let n = entries.len();
        let mut grid: Vec<Vec<BlockEntry>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                if i == j {
                    row.push(BlockEntry::E(entries[i].clone()));
                } else {
                    row.push(BlockEntry::E(AffineExpr::zero(entries[i].rows(), entries[j].cols())));
                }
            }
            grid.push(row);
        }
        Self::block(&grid)
    }
}

/// Entry of a block grid: an explicit expression or the `∗` mirror marker.
#[derive(Clone, Debug)]
pub enum BlockEntry {
    E(AffineExpr),
    Mirror,
}

impl BlockEntry {
    pub fn of(e: AffineExpr) -> Self {
        BlockEntry::E(e)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        BlockEntry::E(AffineExpr::zero(rows, cols))
    }
}

impl Add for &AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "expression add dims");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        AffineExpr { rows: self.rows, cols: self.cols, constant: &self.constant + &rhs.constant, terms }
    }
}

impl Sub for &AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        self + &rhs.neg()
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmimodel::LmiProblem;

    #[test]
    fn block_mirror_expands_to_transpose() {
        let mut p = LmiProblem::new();
        let k = p.rectangular(1, 2, "K").unwrap();
        let a = AffineExpr::constant(DenseMatrix::identity(1));
        let b = AffineExpr::var(k); // 1x2
        let c = AffineExpr::constant(DenseMatrix::identity(2));
        let blk = AffineExpr::block(&[
            vec![BlockEntry::E(a), BlockEntry::E(b)],
            vec![BlockEntry::Mirror, BlockEntry::E(c)],
        ])
        .unwrap();
        let mut at = Assignment::default();
        at.set(k, DenseMatrix::from_rows(&[vec![2.0, 3.0]]));
        let v = blk.eval(&at).unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ]);
        assert!((&v - &expected).frob_norm() < 1e-14);
    }

    #[test]
    fn he_and_transpose() {
        let mut p = LmiProblem::new();
        let v = p.rectangular(2, 2, "V").unwrap();
        let e = AffineExpr::var(v).he();
        let mut at = Assignment::default();
        let val = DenseMatrix::from_rows(&[vec![1.0, 5.0], vec![0.0, 2.0]]);
        at.set(v, val.clone());
        let got = e.eval(&at).unwrap();
        let expected = &val + &val.transpose();
        assert!((&got - &expected).frob_norm() < 1e-14);
    }

    #[test]
    fn nonaffine_product_rejected() {
        let mut p = LmiProblem::new();
        let a = p.symmetric(2, "A").unwrap();
        let b = p.symmetric(2, "B").unwrap();
        let ea = AffineExpr::var(a);
        let eb = AffineExpr::var(b);
        assert!(matches!(AffineExpr::mul_expr(&ea, &eb), Err(Error::NonAffine(_))));
        // constant×affine is fine
        let c = AffineExpr::constant(DenseMatrix::identity(2));
        assert!(AffineExpr::mul_expr(&c, &ea).is_ok());
    }

    #[test]
    fn one_by_one_grid_is_identity_on_expressions() {
        let e = AffineExpr::constant(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]));
        let blk = AffineExpr::block(&[vec![BlockEntry::E(e.clone())]]).unwrap();
        let at = Assignment::default();
        assert!((&blk.eval(&at).unwrap() - &e.eval(&at).unwrap()).frob_norm() < 1e-15);
    }
}
