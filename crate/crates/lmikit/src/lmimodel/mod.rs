//! Symbolic LMI layer: matrix decision variables, block-structured affine
//! matrix expressions, constraints/objectives, and vectorization into the
//! canonical SDP standard form `F₀ + Σ xᵢ Fᵢ ⪯ 0` (block diagonal, plus
//! linear equality rows).

mod expr;
mod standard;
mod embed;

pub use embed::{quadratic_to_lmi, real_embedding, GammaArg, QuadraticLmi};
pub use expr::{AffineExpr, BlockEntry};
pub use standard::{SdpBlock, SdpStandardForm};

use crate::matcore::DenseMatrix;
use crate::{Error, Result};

/// Structure of a matrix decision variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// Symmetric n×n, contributing n(n+1)/2 scalar unknowns.
    Symmetric(usize),
    /// Rectangular m×n, contributing m·n scalar unknowns.
    Rectangular(usize, usize),
    /// A single scalar.
    Scalar,
}

impl VarKind {
    pub fn scalar_count(&self) -> usize {
        match *self {
            VarKind::Symmetric(n) => n * (n + 1) / 2,
            VarKind::Rectangular(m, n) => m * n,
            VarKind::Scalar => 1,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match *self {
            VarKind::Symmetric(n) => (n, n),
            VarKind::Rectangular(m, n) => (m, n),
            VarKind::Scalar => (1, 1),
        }
    }
}

/// Lightweight handle to a declared variable; cheap to copy into expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarRef {
    pub(crate) id: usize,
    pub(crate) kind: VarKind,
}

impl VarRef {
    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn id(&self) -> usize {
        self.id
    }
}

/// A declared matrix decision variable.
#[derive(Clone, Debug)]
pub struct MatrixVariable {
    pub id: usize,
    pub kind: VarKind,
    pub name: String,
    /// Offset of this variable's scalar unknowns in the global vector.
    pub offset: usize,
}

/// Constraint sense.
#[derive(Clone, Debug)]
pub enum Sense {
    /// `E(x) ⪯ 0`; `strictness > 0` realizes `E(x) ≺ 0` via `E + εI ⪯ 0`.
    /// `None` requests the problem-level default ε for strict constraints.
    NegSemidef { strictness: Option<f64> },
    /// `E(x) = 0` entrywise.
    Zero,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub expr: AffineExpr,
    pub sense: Sense,
    pub label: String,
}

/// Linear objective `Σ tr(CᵢᵀVᵢ) + Σ cⱼ·scalarⱼ`, minimized.
#[derive(Clone, Debug, Default)]
pub struct Objective {
    pub(crate) trace_terms: Vec<(VarRef, DenseMatrix)>,
    pub(crate) scalar_terms: Vec<(VarRef, f64)>,
}

impl Objective {
    pub fn feasibility() -> Self {
        Self::default()
    }

    pub fn add_trace(mut self, c: DenseMatrix, v: VarRef) -> Self {
        self.trace_terms.push((v, c));
        self
    }

    pub fn add_scalar(mut self, weight: f64, v: VarRef) -> Self {
        self.scalar_terms.push((v, weight));
        self
    }

    /// Minimize a single scalar variable.
    pub fn scalar(v: VarRef) -> Self {
        Self::default().add_scalar(1.0, v)
    }

    pub fn is_feasibility(&self) -> bool {
        self.trace_terms.is_empty() && self.scalar_terms.is_empty()
    }
}

/// An LMI problem under construction.
#[derive(Clone, Debug, Default)]
pub struct LmiProblem {
    vars: Vec<MatrixVariable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    total_scalars: usize,
}

impl LmiProblem {
    pub fn new() -> Self {
        Self::default()
    }

    fn declare(&mut self, kind: VarKind, name: &str) -> Result<VarRef> {
        if self.vars.iter().any(|v| v.name == name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = self.vars.len();
        let offset = self.total_scalars;
        self.total_scalars += kind.scalar_count();
        self.vars.push(MatrixVariable { id, kind, name: name.to_string(), offset });
        Ok(VarRef { id, kind })
    }

    pub fn symmetric(&mut self, n: usize, name: &str) -> Result<VarRef> {
        self.declare(VarKind::Symmetric(n), name)
    }

    pub fn rectangular(&mut self, rows: usize, cols: usize, name: &str) -> Result<VarRef> {
        self.declare(VarKind::Rectangular(rows, cols), name)
    }

    pub fn scalar(&mut self, name: &str) -> Result<VarRef> {
        self.declare(VarKind::Scalar, name)
    }

    pub fn variables(&self) -> &[MatrixVariable] {
        &self.vars
    }

    pub fn scalar_count(&self) -> usize {
        self.total_scalars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn push_neg(&mut self, expr: AffineExpr, strictness: Option<f64>, label: &str) {
        self.constraints.push(Constraint {
            expr,
            sense: Sense::NegSemidef { strictness },
            label: label.to_string(),
        });
    }

    /// `E ⪯ 0`.
    pub fn require_neg_semidefinite(&mut self, expr: AffineExpr, label: &str) {
        self.push_neg(expr, Some(0.0), label);
    }

    /// `E ≺ 0` with the default ε shift.
    pub fn require_neg_definite(&mut self, expr: AffineExpr, label: &str) {
        self.push_neg(expr, None, label);
    }

    /// `E ≺ 0` with an explicit ε shift.
    pub fn require_neg_definite_eps(&mut self, expr: AffineExpr, eps: f64, label: &str) {
        self.push_neg(expr, Some(eps), label);
    }

    /// `E ⪰ 0`.
    pub fn require_pos_semidefinite(&mut self, expr: AffineExpr, label: &str) {
        self.push_neg(expr.neg(), Some(0.0), label);
    }

    /// `E ≻ 0` with the default ε shift.
    pub fn require_pos_definite(&mut self, expr: AffineExpr, label: &str) {
        self.push_neg(expr.neg(), None, label);
    }

    /// `E ≻ 0` with an explicit ε shift (`E ⪰ εI`).
    pub fn require_pos_definite_eps(&mut self, expr: AffineExpr, eps: f64, label: &str) {
        self.push_neg(expr.neg(), Some(eps), label);
    }

    /// `E = 0` entrywise.
    pub fn require_zero(&mut self, expr: AffineExpr, label: &str) {
        self.constraints.push(Constraint { expr, sense: Sense::Zero, label: label.to_string() });
    }

    pub fn minimize(&mut self, objective: Objective) {
        self.objective = objective;
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub(crate) fn var(&self, id: usize) -> &MatrixVariable {
        &self.vars[id]
    }

    /// Reconstruct a variable's matrix value from the global scalar vector.
    pub fn extract(&self, v: VarRef, x: &[f64]) -> DenseMatrix {
        let var = &self.vars[v.id];
        let off = var.offset;
        match var.kind {
            VarKind::Scalar => DenseMatrix::scalar(x[off]),
            VarKind::Rectangular(m, n) => {
                let mut out = DenseMatrix::zeros(m, n);
                let mut k = off;
                for r in 0..m {
                    for c in 0..n {
                        out.set(r, c, x[k]);
                        k += 1;
                    }
                }
                out
            }
            VarKind::Symmetric(n) => {
                let mut out = DenseMatrix::zeros(n, n);
                let mut k = off;
                for i in 0..n {
                    out.set(i, i, x[k]);
                    k += 1;
                }
                for c in 1..n {
                    for r in 0..c {
                        out.set(r, c, x[k]);
                        out.set(c, r, x[k]);
                        k += 1;
                    }
                }
                out
            }
        }
    }

    /// Enumerate the canonical basis matrices of a variable in the fixed
    /// ordering (symmetric: diagonal entries first in row order, then
    /// off-diagonals column-major over the upper triangle).
    pub(crate) fn basis_matrices(kind: VarKind) -> Vec<DenseMatrix> {
        match kind {
            VarKind::Scalar => vec![DenseMatrix::scalar(1.0)],
            VarKind::Rectangular(m, n) => {
                let mut out = Vec::with_capacity(m * n);
                for r in 0..m {
                    for c in 0..n {
                        let mut e = DenseMatrix::zeros(m, n);
                        e.set(r, c, 1.0);
                        out.push(e);
                    }
                }
                out
            }
            VarKind::Symmetric(n) => {
                let mut out = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    let mut e = DenseMatrix::zeros(n, n);
                    e.set(i, i, 1.0);
                    out.push(e);
                }
                for c in 1..n {
                    for r in 0..c {
                        let mut e = DenseMatrix::zeros(n, n);
                        e.set(r, c, 1.0);
                        e.set(c, r, 1.0);
                        out.push(e);
                    }
                }
                out
            }
        }
    }
}

/// Variable assignment used when evaluating expressions.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: Vec<Option<DenseMatrix>>,
}

impl Assignment {
    /// Build the assignment corresponding to a global scalar vector.
    pub fn from_scalars(problem: &LmiProblem, x: &[f64]) -> Self {
        let mut values = vec![None; problem.vars.len()];
        for var in problem.variables() {
            values[var.id] = Some(problem.extract(VarRef { id: var.id, kind: var.kind }, x));
        }
        Self { values }
    }

    pub fn set(&mut self, v: VarRef, value: DenseMatrix) {
        if self.values.len() <= v.id {
            self.values.resize(v.id + 1, None);
        }
        self.values[v.id] = Some(value);
    }

    pub fn get(&self, v: VarRef) -> Option<&DenseMatrix> {
        self.values.get(v.id).and_then(|o| o.as_ref())
    }
}
