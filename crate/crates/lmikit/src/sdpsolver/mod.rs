//! Primal-dual interior-point solver for block-diagonal SDPs in the
//! canonical standard form
//!
//! ```text
//! min cᵀx   s.t.   F₀ᵏ + Σᵢ xᵢFᵢᵏ ⪯ 0  (per block k),   A_eq x = b_eq,
//! ```
//!
//! plus the feasibility-margin and scalar-bisection utilities layered on it.
//!
//! The engine is an infeasible-start homogeneous-embedding method with the
//! HKM search direction and a Mehrotra predictor-corrector step; see
//! [`hsde`] for the working parts. Infeasibility/unboundedness verdicts come
//! out of the embedding's τ/κ ray test with explicit certificates.

mod hsde;

use crate::lmimodel::SdpStandardForm;
use crate::matcore::{DenseMatrix, SymmetricMatrix};
use crate::{Error, Result};

/// Options for a single solve.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Relative duality-gap tolerance.
    pub gap_tol: f64,
    /// Relative primal/dual feasibility tolerance.
    pub feas_tol: f64,
    /// Fraction-to-boundary step damping, in (0,1).
    pub step_fraction: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 200, gap_tol: 1e-9, feas_tol: 1e-9, step_fraction: 0.98 }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if self.gap_tol <= 0.0 || self.feas_tol <= 0.0 {
            return Err(Error::Precondition("solver tolerances must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::Precondition("step fraction must lie in (0,1)".into()));
        }
        Ok(())
    }
}

/// Termination status of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SolveStatus {
    Optimal,
    /// Primal infeasible; a Farkas certificate is attached.
    Infeasible,
    /// Primal unbounded below (dual infeasible); an improving ray is attached.
    Unbounded,
    MaxIterations,
    NumericalFailure,
}

/// Residuals of the returned (normalized) iterate.
#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct ResidualReport {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Farkas certificate of primal infeasibility: `Z ⪰ 0`, `y` with
/// `Σ_k ⟨Fᵢᵏ, Zᵏ⟩ = (A_eqᵀ y)ᵢ` and `Σ_k ⟨F₀ᵏ, Zᵏ⟩ + b_eqᵀ y > 0`.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub duals: Vec<SymmetricMatrix>,
    pub eq_duals: Vec<f64>,
    /// The (positive) certificate objective `Σ⟨F₀,Z⟩ + bᵀy`.
    pub objective: f64,
    /// Residual of the ray's stationarity equations.
    pub residual: f64,
}

/// Improving-ray certificate of unboundedness: `x` with `Σ xᵢFᵢᵏ ⪯ 0`,
/// `A_eq x = 0`, `cᵀx < 0`.
#[derive(Clone, Debug)]
pub struct ImprovingRay {
    pub x: Vec<f64>,
    pub residual: f64,
}

/// Per-iteration diagnostics. The exact relation
/// `dobj − pobj = (κ/τ) ± (gap-row residual)/1` ties the two objectives
/// through the homogenization; both extra terms vanish at convergence.
#[derive(Clone, Copy, Debug)]
pub struct IterationStat {
    pub pobj: f64,
    pub dobj: f64,
    pub kappa_over_tau: f64,
    pub gap_row_residual: f64,
}

/// Result of one solve.
#[derive(Clone, Debug)]
pub struct Solution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    /// Per-block primal slack `S = −F(x)` of the normalized iterate.
    pub slacks: Vec<SymmetricMatrix>,
    /// Per-block dual matrices.
    pub duals: Vec<SymmetricMatrix>,
    /// Multipliers of the equality rows.
    pub eq_duals: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    pub residuals: ResidualReport,
    pub iterations: usize,
    pub farkas: Option<FarkasCertificate>,
    pub ray: Option<ImprovingRay>,
    /// Per-iteration diagnostics.
    pub trail: Vec<IterationStat>,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Solve a standard-form SDP.
pub fn solve(form: &SdpStandardForm, opts: &SolverOptions) -> Result<Solution> {
    opts.validate()?;
    hsde::solve_hsde(form, opts)
}

/// Report of a feasibility-margin computation: the optimal uniform shift
/// `t*` with `F(x) ⪯ t·I` on every block.
#[derive(Clone, Debug)]
pub struct MarginReport {
    /// Optimal shift; `-∞` when the margin is unbounded below.
    pub t_star: f64,
    /// Argument achieving the margin (empty when unbounded).
    pub x: Vec<f64>,
    pub status: SolveStatus,
}

/// Minimize `t` subject to `F(x) ⪯ t·I` per block (and the equality rows).
/// `t* < 0` certifies strict feasibility with margin `|t*|`; unboundedness
/// (a common nullspace direction that improves all blocks) reports `-∞`.
pub fn feasibility_margin(form: &SdpStandardForm, opts: &SolverOptions) -> Result<MarginReport> {
    let m = form.m;
    let mut blocks = form.blocks.clone();
    for b in blocks.iter_mut() {
        b.fi.push(DenseMatrix::scaled_identity(b.dim, -1.0));
    }
    let mut cost = vec![0.0; m + 1];
    cost[m] = 1.0;
    let eq_a = if form.eq_a.rows() > 0 {
        DenseMatrix::hstack(&[&form.eq_a, &DenseMatrix::zeros(form.eq_a.rows(), 1)])
    } else {
        DenseMatrix::zeros(0, m + 1)
    };
    let aug = SdpStandardForm { m: m + 1, blocks, eq_a, eq_b: form.eq_b.clone(), cost };
    let sol = solve(&aug, opts)?;
    match sol.status {
        SolveStatus::Optimal => {
            let t = sol.x[m];
            Ok(MarginReport { t_star: t, x: sol.x[..m].to_vec(), status: SolveStatus::Optimal })
        }
        SolveStatus::Unbounded => {
            Ok(MarginReport { t_star: f64::NEG_INFINITY, x: vec![], status: SolveStatus::Unbounded })
        }
        other => Err(Error::SolverFailure(format!("feasibility margin ended with {other:?}"))),
    }
}

/// Bisection for the smallest `γ` in `[lo, hi]` with `predicate(γ)` true,
/// assuming the predicate is monotone (false below a threshold, true above).
/// The result satisfies `|γ* − inf{γ : feasible}| ≤ tol`.
pub fn bisect_scalar<F>(mut predicate: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    if !(hi >= lo) || tol <= 0.0 {
        return Err(Error::Bracket("bisection needs hi ≥ lo and tol > 0".into()));
    }
    if !predicate(hi) {
        return Err(Error::Bracket(format!("predicate is false at the upper bracket {hi}")));
    }
    if predicate(lo) {
        return Ok(lo);
    }
    let mut lo = lo;
    let mut hi = hi;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if predicate(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lmimodel::SdpStandardForm;
    use crate::matcore::{symeig, DenseMatrix, SymmetricMatrix};

    fn scalar_cap_form() -> SdpStandardForm {
        // feasibility: -1 + x·1 ⪯ 0, any x ≤ 1
        SdpStandardForm::from_single_block(
            DenseMatrix::scaled_identity(2, -1.0),
            vec![DenseMatrix::identity(2)],
            vec![0.0],
        )
    }

    #[test]
    fn scalar_cap_feasible() {
        let sol = solve(&scalar_cap_form(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(sol.x[0] <= 1.0 + 1e-7);
    }

    #[test]
    fn interval_projection_minimum() {
        // min x s.t. diag(x-1, -x) ⪯ 0  →  0 ≤ x ≤ 1, x* = 0
        let f0 = DenseMatrix::diag(&[-1.0, 0.0]);
        let f1 = DenseMatrix::diag(&[1.0, -1.0]);
        let form = SdpStandardForm::from_single_block(f0, vec![f1], vec![1.0]);
        let sol = solve(&form, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.x[0]).abs() < 1e-7, "x* = {}", sol.x[0]);
        assert!(sol.objective.abs() < 1e-7);
    }

    /// Scale-pinned Lyapunov feasibility: blocks `AᵀP+PA+I ⪯ tI`,
    /// `I − P ⪯ tI`, `P − 100I ⪯ tI`. Bounded margin, decisively negative
    /// exactly when A is Hurwitz.
    fn pinned_lyapunov_form(
        a: &DenseMatrix,
    ) -> (crate::lmimodel::LmiProblem, crate::lmimodel::VarRef, SdpStandardForm) {
        let n = a.rows();
        let mut prob = crate::lmimodel::LmiProblem::new();
        let p = prob.symmetric(n, "P").unwrap();
        let pe = crate::lmimodel::AffineExpr::var(p);
        let lyap = &(&pe.lmul(&a.transpose()) + &pe.rmul(&a))
            + &crate::lmimodel::AffineExpr::identity(n);
        prob.require_neg_definite_eps(lyap, 0.0, "lyap");
        prob.require_pos_definite_eps(pe.clone(), 1.0, "pd");
        prob.require_neg_definite_eps(
            &pe - &crate::lmimodel::AffineExpr::constant(DenseMatrix::scaled_identity(n, 100.0)),
            0.0,
            "cap",
        );
        let form = prob.to_standard_form().unwrap();
        (prob, p, form)
    }

    #[test]
    fn lyapunov_feasibility_with_stable_a() {
        // A = [[0,1],[-2,-3]] (eigenvalues -1,-2)
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let (prob, p, form) = pinned_lyapunov_form(&a);
        let report = feasibility_margin(&form, &SolverOptions::default()).unwrap();
        assert!(report.t_star < -0.1, "margin {}", report.t_star);
        // reconstruct P and verify definiteness of both constraints
        let pm = prob.extract(p, &report.x);
        let s = SymmetricMatrix::symmetrize(&pm);
        assert!(s.min_eig().unwrap() > 0.5);
        let lhs = SymmetricMatrix::symmetrize(&(&(&a.transpose() * &pm) + &(&pm * &a)));
        let (vals, _) = symeig(&lhs).unwrap();
        assert!(*vals.last().unwrap() < 0.0);
    }

    #[test]
    fn margin_of_constant_blocks() {
        // F = -I constant: t* = -1; F = 0 constant: t* = 0
        let form = SdpStandardForm::from_single_block(DenseMatrix::scaled_identity(3, -1.0), vec![], vec![]);
        let r = feasibility_margin(&form, &SolverOptions::default()).unwrap();
        assert!((r.t_star + 1.0).abs() < 1e-6);
        let form0 = SdpStandardForm::from_single_block(DenseMatrix::zeros(2, 2), vec![], vec![]);
        let r0 = feasibility_margin(&form0, &SolverOptions::default()).unwrap();
        assert!(r0.t_star.abs() < 1e-6);
    }

    #[test]
    fn unstable_lyapunov_margin_positive() {
        // A = [[0,1],[0,0]] marginal: no P ≻ 0 with AᵀP+PA ≺ 0; with the
        // +I pin the margin lands decisively at ≈ 1
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let (_prob, _p, form) = pinned_lyapunov_form(&a);
        let report = feasibility_margin(&form, &SolverOptions::default()).unwrap();
        assert!(report.t_star > 0.5, "margin {}", report.t_star);
    }

    #[test]
    fn unbounded_margin_reports_negative_infinity() {
        // F(x) = x·(−I): margin unbounded below
        let form = SdpStandardForm::from_single_block(
            DenseMatrix::zeros(2, 2),
            vec![DenseMatrix::scaled_identity(2, -1.0)],
            vec![0.0],
        );
        let report = feasibility_margin(&form, &SolverOptions::default()).unwrap();
        assert_eq!(report.t_star, f64::NEG_INFINITY);
    }

    #[test]
    fn bisect_synthetic_step() {
        let gamma = bisect_scalar(|g| g >= 2.0, 0.0, 10.0, 1e-6).unwrap();
        assert!((gamma - 2.0).abs() <= 1e-6);
        let lo = bisect_scalar(|_| true, 0.5, 10.0, 1e-6).unwrap();
        assert!((lo - 0.5).abs() < 1e-12);
        assert!(bisect_scalar(|g| g > 100.0, 0.0, 10.0, 1e-6).is_err());
    }
}
