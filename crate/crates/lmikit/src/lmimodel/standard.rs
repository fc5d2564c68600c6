//! Vectorization of an [`LmiProblem`](super::LmiProblem) into the canonical
//! standard form `min cᵀx  s.t.  F₀ᵏ + Σᵢ xᵢ Fᵢᵏ ⪯ 0` per block `k`, plus
//! equality rows `A_eq x = b_eq`.

use super::{Assignment, LmiProblem, Sense, VarRef};
use crate::matcore::DenseMatrix;
use crate::{Error, Result};

/// One PSD block of the standard form.
#[derive(Clone, Debug)]
pub struct SdpBlock {
    pub dim: usize,
    pub f0: DenseMatrix,
    /// Coefficient matrices, one per scalar unknown.
    pub fi: Vec<DenseMatrix>,
    pub label: String,
}

impl SdpBlock {
    /// Evaluate `F(x) = F₀ + Σ xᵢFᵢ`.
    pub fn eval(&self, x: &[f64]) -> DenseMatrix {
        let mut out = self.f0.clone();
        for (fi, &xi) in self.fi.iter().zip(x.iter()) {
            if xi != 0.0 {
                out = &out + &fi.scale(xi);
            }
        }
        out
    }
}

/// Canonical SDP standard form.
#[derive(Clone, Debug)]
pub struct SdpStandardForm {
    /// Number of scalar unknowns.
    pub m: usize,
    pub blocks: Vec<SdpBlock>,
    /// Equality rows `A_eq x = b_eq` (possibly empty).
    pub eq_a: DenseMatrix,
    pub eq_b: Vec<f64>,
    /// Linear cost, minimized.
    pub cost: Vec<f64>,
}

impl SdpStandardForm {
    /// Assemble a form from raw parts.
    pub fn from_parts(
        m: usize,
        blocks: Vec<SdpBlock>,
        eq_a: DenseMatrix,
        eq_b: Vec<f64>,
        cost: Vec<f64>,
    ) -> Self {
        Self { m, blocks, eq_a, eq_b, cost }
    }

    /// Build a one-block form directly from matrices (used by solver unit
    /// tests and by the SDPA import path).
    pub fn from_single_block(f0: DenseMatrix, fi: Vec<DenseMatrix>, cost: Vec<f64>) -> Self {
        let m = fi.len();
        assert_eq!(cost.len(), m);
        let dim = f0.rows();
        Self {
            m,
            blocks: vec![SdpBlock { dim, f0, fi, label: "block0".into() }],
            eq_a: DenseMatrix::zeros(0, m),
            eq_b: vec![],
            cost,
        }
    }

    pub fn total_psd_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    /// Worst (largest) eigenvalue-style residual of `F(x) ⪯ 0` over all
    /// blocks, via max eigenvalue of each evaluated block.
    pub fn max_block_eig(&self, x: &[f64]) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for b in &self.blocks {
            if b.dim == 0 {
                continue;
            }
            let s = crate::matcore::SymmetricMatrix::symmetrize(&b.eval(x));
            worst = worst.max(s.max_eig()?);
        }
        if worst == f64::NEG_INFINITY {
            worst = 0.0;
        }
        Ok(worst)
    }
}

/// Default strictness scale: `ε = 1e-7 · scale`, `scale` the largest
/// constant-block Frobenius norm (1 when all constants vanish).
pub(crate) fn default_strictness(problem: &LmiProblem) -> f64 {
    let mut scale = 0.0_f64;
    for c in problem.constraints() {
        scale = scale.max(c.expr.constant_part().frob_norm());
    }
    if scale == 0.0 {
        scale = 1.0;
    }
    1e-7 * scale
}

impl LmiProblem {
    /// Vectorize into the canonical standard form. Symmetric-variable
    /// unknowns are enumerated over the fixed basis; each `⪯`-constraint
    /// becomes one PSD block; strict constraints are shifted `F₀ → F₀ + εI`;
    /// `=`-constraints become equality rows.
    pub fn to_standard_form(&self) -> Result<SdpStandardForm> {
        let m = self.scalar_count();
        let eps_default = default_strictness(self);
        let mut blocks = Vec::new();
        let mut eq_rows: Vec<Vec<f64>> = Vec::new();
        let mut eq_rhs: Vec<f64> = Vec::new();

        for c in self.constraints() {
            match &c.sense {
                Sense::NegSemidef { strictness } => {
                    let dim = c.expr.rows();
                    if c.expr.cols() != dim {
                        return Err(Error::NonsymmetricConstraint(format!(
                            "`{}` is {}x{}",
                            c.label,
                            c.expr.rows(),
                            c.expr.cols()
                        )));
                    }
                    let eps = strictness.unwrap_or(eps_default);
                    let mut grads = vec![DenseMatrix::zeros(dim, dim); m];
                    c.expr.accumulate_gradients(self, &mut grads);
                    let mut f0 = c.expr.constant_part().clone();
                    // verify symmetry of every coefficient, then symmetrize
                    let tol = 1e-9 * f0.frob_norm().max(1.0);
                    if dim > 0 && f0.max_asymmetry() > tol {
                        return Err(Error::NonsymmetricConstraint(format!(
                            "constant block of `{}` (asymmetry {:.3e})",
                            c.label,
                            f0.max_asymmetry()
                        )));
                    }
                    for (j, g) in grads.iter().enumerate() {
                        let gtol = 1e-9 * g.frob_norm().max(1.0);
                        if dim > 0 && g.max_asymmetry() > gtol {
                            return Err(Error::NonsymmetricConstraint(format!(
                                "coefficient {} of `{}` (asymmetry {:.3e})",
                                j,
                                c.label,
                                g.max_asymmetry()
                            )));
                        }
                    }
                    if eps != 0.0 {
                        f0 = &f0 + &DenseMatrix::scaled_identity(dim, eps);
                    }
                    blocks.push(SdpBlock {
                        dim,
                        f0: f0.sym_part(),
                        fi: grads.into_iter().map(|g| g.sym_part()).collect(),
                        label: c.label.clone(),
                    });
                }
                Sense::Zero => {
                    let (r, ccols) = (c.expr.rows(), c.expr.cols());
                    let mut grads = vec![DenseMatrix::zeros(r, ccols); m];
                    c.expr.accumulate_gradients(self, &mut grads);
                    let f0 = c.expr.constant_part();
                    for rr in 0..r {
                        for cc in 0..ccols {
                            let row: Vec<f64> = grads.iter().map(|g| g.get(rr, cc)).collect();
                            eq_rhs.push(-f0.get(rr, cc));
                            eq_rows.push(row);
                        }
                    }
                }
            }
        }

        let mut cost = vec![0.0; m];
        for (v, cmat) in &self.objective().trace_terms {
            let var = self.var(v.id);
            let (sr, sc) = var.kind.shape();
            if (cmat.rows(), cmat.cols()) != (sr, sc) {
                return Err(Error::DimensionMismatch(format!(
                    "objective coefficient for `{}`",
                    var.name
                )));
            }
            for (b, basis) in LmiProblem::basis_matrices(var.kind).into_iter().enumerate() {
                cost[var.offset + b] += cmat.dot(&basis); // tr(Cᵀ E_b)
            }
        }
        for (v, w) in &self.objective().scalar_terms {
            let var = self.var(v.id);
            cost[var.offset] += *w;
        }

        let p = eq_rows.len();
        let mut eq_a = DenseMatrix::zeros(p, m);
        for (i, row) in eq_rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                eq_a.set(i, j, v);
            }
        }

        Ok(SdpStandardForm { m, blocks, eq_a, eq_b: eq_rhs, cost })
    }

    /// Evaluate all `⪯`-constraints symbolically at a scalar vector; returns
    /// the per-constraint matrices (for residual replay against the
    /// vectorized path).
    pub fn eval_constraints(&self, x: &[f64]) -> Result<Vec<DenseMatrix>> {
        let at = Assignment::from_scalars(self, x);
        let mut out = Vec::new();
        for c in self.constraints() {
            if matches!(c.sense, Sense::NegSemidef { .. }) {
                out.push(c.expr.eval(&at)?);
            }
        }
        Ok(out)
    }

    /// Objective value at a scalar vector.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let mut val = 0.0;
        for (v, cmat) in &self.objective().trace_terms {
            let m = self.extract(*v, x);
            val += cmat.dot(&m);
        }
        for (v, w) in &self.objective().scalar_terms {
            val += w * x[self.var(v.id).offset];
        }
        val
    }
}

/// Convenience handle pairing a variable with its problem-global offset; used
/// by callers that index solver output directly.
pub fn var_offset(problem: &LmiProblem, v: VarRef) -> usize {
    problem.var(v.id).offset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmimodel::AffineExpr;
    use crate::matcore::SymmetricMatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// The worked basis-expansion case: n=2 symmetric P in PA + AᵀP + Q ≺ 0
    /// gives Fᵢ = EᵢA + AᵀEᵢ.
    #[test]
    fn lyapunov_standard_form_has_basis_coefficients() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let q = DenseMatrix::identity(2);
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(2, "P").unwrap();
        let pe = AffineExpr::var(p);
        let lmi = &(&pe.rmul(&a) + &pe.lmul(&a.transpose())) + &AffineExpr::constant(q.clone());
        prob.require_neg_definite_eps(lmi, 0.0, "lyap");
        let sf = prob.to_standard_form().unwrap();
        assert_eq!(sf.m, 3);
        assert_eq!(sf.blocks.len(), 1);
        let basis = LmiProblem::basis_matrices(p.kind());
        for (fi, e) in sf.blocks[0].fi.iter().zip(basis.iter()) {
            let expected = &(e * &a) + &(&a.transpose() * e);
            assert!((fi - &expected).frob_norm() < 1e-14);
        }
        assert!((&sf.blocks[0].f0 - &q).frob_norm() < 1e-14);
    }

    #[test]
    fn round_trip_symbolic_vs_vectorized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = DenseMatrix::from_rows(&[vec![-1.0, 0.4], vec![0.2, -2.0]]);
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(2, "P").unwrap();
        let g = prob.scalar("g").unwrap();
        let pe = AffineExpr::var(p);
        let expr = &(&pe.rmul(&a).he() + &AffineExpr::scalar_times_identity(g, 2))
            + &AffineExpr::constant(DenseMatrix::identity(2));
        prob.require_neg_definite_eps(expr.clone(), 0.0, "c");
        let sf = prob.to_standard_form().unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..sf.m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let via_blocks = sf.blocks[0].eval(&x);
            let at = Assignment::from_scalars(&prob, &x);
            let direct = expr.eval(&at).unwrap();
            assert!((&via_blocks - &direct).frob_norm() <= 1e-12);
        }
    }

    #[test]
    fn two_constraints_two_blocks_same_unknowns() {
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(3, "P").unwrap();
        prob.require_neg_definite_eps(AffineExpr::var(p).neg(), 0.0, "pd");
        prob.require_neg_definite_eps(AffineExpr::var(p), 0.0, "nd");
        let sf = prob.to_standard_form().unwrap();
        assert_eq!(sf.blocks.len(), 2);
        assert_eq!(sf.m, 6);
    }

    #[test]
    fn equality_rows_vectorize_entrywise() {
        let mut prob = LmiProblem::new();
        let k = prob.rectangular(1, 2, "K").unwrap();
        // K - [1 2] = 0
        let expr = &AffineExpr::var(k) - &AffineExpr::constant(DenseMatrix::from_rows(&[vec![1.0, 2.0]]));
        prob.require_zero(expr, "fix");
        let sf = prob.to_standard_form().unwrap();
        assert_eq!(sf.eq_b, vec![1.0, 2.0]);
        assert_eq!(sf.eq_a.rows(), 2);
        assert_eq!(sf.eq_a.get(0, 0), 1.0);
        assert_eq!(sf.eq_a.get(1, 1), 1.0);
    }

    #[test]
    fn strict_shift_applied_to_constant() {
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(2, "P").unwrap();
        prob.require_pos_definite_eps(AffineExpr::var(p), 0.5, "pd");
        let sf = prob.to_standard_form().unwrap();
        // block is -P + 0.5 I ⪯ 0
        let s = SymmetricMatrix::symmetrize(&sf.blocks[0].f0);
        assert!((s.as_mat().get(0, 0) - 0.5).abs() < 1e-15);
        assert!((s.as_mat().get(1, 1) - 0.5).abs() < 1e-15);
    }
}
