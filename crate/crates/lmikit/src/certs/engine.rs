//! Shared certificate machinery: margin-based feasibility verdicts and
//! objective minimization with witness extraction and residual replay.

use super::{Certificate, Verdict};
use crate::lmimodel::{AffineExpr, Assignment, LmiProblem, Objective, VarRef};
use crate::matcore::{DenseMatrix, SymmetricMatrix};
use crate::sdpsolver::{solve, SolveStatus, SolverOptions};
use crate::{Error, Result};

/// Judge threshold shared by the margin policy: `ε = 1e-7 · scale`.
pub(crate) fn judge_eps(scale: f64) -> f64 {
    1e-7 * scale.max(1.0)
}

/// Builder for feasibility certificates.
///
/// Property blocks are added as `E − t·I ⪯ 0` (optionally with a `+pin·I`
/// offset that turns a homogeneous strict LMI into a scale-pinned one);
/// hard blocks do not carry the shift. The margin `t` is minimized subject
/// to `t ≥ −cap`, and the verdict follows the `ε`-band policy.
pub(crate) struct CertBuilder {
    pub prob: LmiProblem,
    t: VarRef,
    cap: f64,
    eps: f64,
    watch: Vec<(String, VarRef)>,
    /// property expressions replayed at the witness (without shift or pin)
    replay: Vec<(AffineExpr, String)>,
    notes: Vec<String>,
}

impl CertBuilder {
    pub fn new(eps: f64) -> Self {
        let mut prob = LmiProblem::new();
        let t = prob.scalar("margin_t").expect("fresh problem");
        Self { prob, t, cap: 1.0, eps, watch: Vec::new(), replay: Vec::new(), notes: Vec::new() }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Property block `E ⪯ 0`, shifted: `E − t·I ⪯ 0`.
    pub fn property(&mut self, expr: AffineExpr, label: &str) {
        let n = expr.rows();
        let shifted = &expr - &AffineExpr::scalar_times_identity(self.t, n);
        self.prob.require_neg_semidefinite(shifted, label);
        self.replay.push((expr, label.to_string()));
    }

    /// Property block `E ≺ 0` for a homogeneous `E`: pinned as
    /// `E + pin·I − t·I ⪯ 0`. The replayed expression keeps the pin so a
    /// Holds witness demonstrates definiteness with a concrete margin.
    pub fn property_pinned(&mut self, expr: AffineExpr, pin: f64, label: &str) {
        let n = expr.rows();
        let pinned = &expr + &AffineExpr::constant(DenseMatrix::scaled_identity(n, pin));
        let shifted = &pinned - &AffineExpr::scalar_times_identity(self.t, n);
        self.prob.require_neg_semidefinite(shifted, label);
        self.replay.push((expr, label.to_string()));
    }

    /// Hard (unshifted) block `E ⪯ −eps·I`.
    pub fn hard(&mut self, expr: AffineExpr, eps: f64, label: &str) {
        self.prob.require_neg_definite_eps(expr, eps, label);
    }

    /// Hard equality rows.
    pub fn hard_zero(&mut self, expr: AffineExpr, label: &str) {
        self.prob.require_zero(expr, label);
    }

    pub fn watch(&mut self, name: &str, v: VarRef) {
        self.watch.push((name.to_string(), v));
    }

    /// Solve the margin problem and judge.
    pub fn feasibility(mut self, form_used: &str, opts: &SolverOptions) -> Result<Certificate> {
        // cap t from below so strictly feasible instances return witnesses
        let cap_expr = &AffineExpr::constant(DenseMatrix::scalar(-self.cap))
            - &AffineExpr::var(self.t);
        self.prob.require_neg_semidefinite(cap_expr, "margin cap");
        self.prob.minimize(Objective::scalar(self.t));
        let formn = self.prob.to_standard_form()?;
        let sol = solve(&formn, opts)?;
        let (verdict, margin) = match sol.status {
            SolveStatus::Optimal => {
                let t_star = self.prob.objective_value(&sol.x);
                if t_star < -self.eps {
                    (Verdict::Holds, t_star)
                } else if t_star > 10.0 * self.eps {
                    (Verdict::Fails, t_star)
                } else {
                    (Verdict::Inconclusive, t_star)
                }
            }
            SolveStatus::Unbounded => (Verdict::Holds, f64::NEG_INFINITY),
            SolveStatus::Infeasible => (Verdict::Fails, f64::INFINITY),
            _ => (Verdict::Inconclusive, f64::NAN),
        };
        let (witnesses, residual) = if verdict == Verdict::Holds && margin.is_finite() {
            let at = Assignment::from_scalars(&self.prob, &sol.x);
            let mut wit = Vec::with_capacity(self.watch.len());
            for (name, v) in &self.watch {
                wit.push((name.clone(), self.prob.extract(*v, &sol.x)));
            }
            let mut worst = f64::NEG_INFINITY;
            for (expr, _) in &self.replay {
                let val = expr.eval(&at)?;
                let s = SymmetricMatrix::symmetrize(&val);
                if s.dim() > 0 {
                    worst = worst.max(s.max_eig()?);
                }
            }
            if worst == f64::NEG_INFINITY {
                worst = 0.0;
            }
            (wit, worst)
        } else {
            (Vec::new(), f64::NAN)
        };
        Ok(Certificate {
            verdict,
            value: None,
            witnesses,
            form_used: form_used.to_string(),
            residual,
            margin: Some(margin),
            notes: self.notes,
        })
    }

    /// Direct objective minimization (norm-type certificates). The margin
    /// variable is unused; strictness comes from per-constraint ε.
    pub fn minimize(
        mut self,
        objective: Objective,
        form_used: &str,
        opts: &SolverOptions,
    ) -> Result<MinimizeOutcome> {
        // pin the unused margin variable so the form stays well-posed
        self.prob.require_zero(AffineExpr::var(self.t), "unused margin");
        self.prob.minimize(objective);
        let formn = self.prob.to_standard_form()?;
        let sol = solve(&formn, opts)?;
        match sol.status {
            SolveStatus::Optimal => {
                let at = Assignment::from_scalars(&self.prob, &sol.x);
                let mut wit = Vec::with_capacity(self.watch.len());
                for (name, v) in &self.watch {
                    wit.push((name.clone(), self.prob.extract(*v, &sol.x)));
                }
                let mut worst = f64::NEG_INFINITY;
                for (expr, _) in &self.replay {
                    let val = expr.eval(&at)?;
                    let s = SymmetricMatrix::symmetrize(&val);
                    if s.dim() > 0 {
                        worst = worst.max(s.max_eig()?);
                    }
                }
                if worst == f64::NEG_INFINITY {
                    worst = 0.0;
                }
                Ok(MinimizeOutcome {
                    status: MinimizeStatus::Optimal,
                    value: self.prob.objective_value(&sol.x),
                    witnesses: wit,
                    residual: worst,
                    x: sol.x,
                    form_used: form_used.to_string(),
                    notes: self.notes,
                })
            }
            SolveStatus::Infeasible => Ok(MinimizeOutcome {
                status: MinimizeStatus::Infeasible,
                value: f64::NAN,
                witnesses: vec![],
                residual: f64::NAN,
                x: vec![],
                form_used: form_used.to_string(),
                notes: self.notes,
            }),
            SolveStatus::Unbounded => Err(Error::SolverFailure(format!(
                "norm minimization `{form_used}` is unbounded below"
            ))),
            other => Ok(MinimizeOutcome {
                status: MinimizeStatus::Unknown,
                value: f64::NAN,
                witnesses: vec![],
                residual: f64::NAN,
                x: vec![],
                form_used: format!("{form_used} ({other:?})"),
                notes: self.notes,
            }),
        }
    }

    /// Access a copy of the margin variable (for expressions that need it).
    pub fn eps(&self) -> f64 {
        self.eps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum MinimizeStatus {
    Optimal,
    Infeasible,
    Unknown,
}

/// Raw output of a norm minimization, before it is packaged into a
/// [`Certificate`] by the specific operation.
pub(crate) struct MinimizeOutcome {
    pub status: MinimizeStatus,
    pub value: f64,
    pub witnesses: Vec<(String, DenseMatrix)>,
    pub residual: f64,
    pub x: Vec<f64>,
    pub form_used: String,
    pub notes: Vec<String>,
}

impl MinimizeOutcome {
    pub fn into_certificate(self, value_transform: impl Fn(f64) -> f64) -> Certificate {
        match self.status {
            MinimizeStatus::Optimal => Certificate {
                verdict: Verdict::Holds,
                value: Some(value_transform(self.value)),
                witnesses: self.witnesses,
                form_used: self.form_used,
                residual: self.residual,
                margin: None,
                notes: self.notes,
            },
            MinimizeStatus::Infeasible => Certificate {
                verdict: Verdict::Fails,
                value: None,
                witnesses: vec![],
                form_used: self.form_used,
                residual: f64::NAN,
                margin: None,
                notes: self.notes,
            },
            MinimizeStatus::Unknown => Certificate {
                verdict: Verdict::Inconclusive,
                value: None,
                witnesses: vec![],
                form_used: self.form_used,
                residual: f64::NAN,
                margin: None,
                notes: self.notes,
            },
        }
    }
}
