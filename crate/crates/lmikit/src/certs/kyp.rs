//! KYP-lemma dissipativity certificates and the supply-rate wrappers that
//! specialize them (bounded-real, positive-real, interior cone, minimum
//! gain).

use super::engine::{judge_eps, CertBuilder};
use super::{Certificate, SupplyRate, Verdict};
use crate::lmimodel::{AffineExpr, BlockEntry};
use crate::matcore::{DenseMatrix, Domain, SymmetricMatrix};
use crate::sdpsolver::SolverOptions;
use crate::sysmodel::{validate, StateSpace};
use crate::{Error, Result};

/// Sign requirement on the storage matrix `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdMode {
    /// `P ≻ 0` (the KYP lemma's statement).
    PositiveDefinite,
    /// `P ⪰ 0` (exterior-cone style wrappers).
    PositiveSemidefinite,
}

/// QSR-dissipativity certificate: find `P` with the dissipation LMI
/// (nonstrict) satisfied. The `w → z` supply is `yᵀQy + 2yᵀSu + uᵀRu`.
pub fn qsr_dissipative(
    sys: &StateSpace,
    supply: &SupplyRate,
    mode: PsdMode,
    opts: &SolverOptions,
) -> Result<Certificate> {
    if supply.q.dim() != sys.outputs() || supply.r.dim() != sys.inputs() {
        return Err(Error::DimensionMismatch("supply rate vs. system i/o".into()));
    }
    let n = sys.order();
    let a = &sys.a;
    let at = sys.a.transpose();
    let b = &sys.b;
    let c = &sys.c;
    let d = &sys.d;
    let q = supply.q.as_mat();
    let s = &supply.s;
    let r = supply.r.as_mat();
    let scale = a
        .frob_norm()
        .max(q.frob_norm())
        .max(s.frob_norm())
        .max(r.frob_norm())
        .max(1.0);
    let eps = judge_eps(scale);
    let mut cb = CertBuilder::new(eps);
    let report = validate(sys)?;
    if !report.minimal {
        cb.note("warning: realization is not minimal; the KYP equivalence may be conservative");
    }
    let pv = cb.prob.symmetric(n, "P")?;
    cb.watch("P", pv);
    let pe = AffineExpr::var(pv);
    let ctq = &c.transpose() * q;
    let (tl, tr, br_const) = match sys.domain {
        Domain::Ct => {
            let tl = &(&pe.rmul(a) + &pe.lmul(&at)) - &AffineExpr::constant(&ctq * c);
            let tr = &pe.rmul(b)
                - &AffineExpr::constant(&(&c.transpose() * s) + &(&ctq * d));
            let br = &(&(&d.transpose() * q) * d).scale(-1.0)
                - &(&(&(&d.transpose() * s) + &(&s.transpose() * d)) + r);
            (tl, tr, br)
        }
        Domain::Dt => {
            let tl = &(&pe.lmul(&at).rmul(a) - &pe) - &AffineExpr::constant(&ctq * c);
            let tr = &pe.lmul(&at).rmul(b)
                - &AffineExpr::constant(&(&c.transpose() * s) + &(&ctq * d));
            let br = &(&(&d.transpose() * q) * d).scale(-1.0)
                - &(&(&(&d.transpose() * s) + &(&s.transpose() * d)) + r);
            (tl, tr, br)
        }
    };
    let br_expr = match sys.domain {
        Domain::Ct => AffineExpr::constant(br_const),
        Domain::Dt => &pe.lmul(&b.transpose()).rmul(b) + &AffineExpr::constant(br_const),
    };
    let block = AffineExpr::block(&[
        vec![BlockEntry::E(tl), BlockEntry::E(tr)],
        vec![BlockEntry::Mirror, BlockEntry::E(br_expr)],
    ])?;
    cb.property(block, "dissipation");
    match mode {
        PsdMode::PositiveDefinite => cb.hard(pe.neg(), 1e-6 * scale * 1e-2, "P pd"),
        PsdMode::PositiveSemidefinite => cb.hard(pe.neg(), 0.0, "P psd"),
    }
    let mut cert = cb.feasibility("qsr_dissipative", opts)?;
    // nonstrict property: a boundary margin still holds
    if cert.verdict == Verdict::Inconclusive {
        if let Some(t) = cert.margin {
            if t <= eps {
                cert.verdict = Verdict::Holds;
            }
        }
    }
    Ok(cert)
}

/// Bounded-real as a QSR special case: `(Q, S, R) = (−I, 0, γ²I)`.
pub fn brl_as_qsr(sys: &StateSpace, gamma: f64, opts: &SolverOptions) -> Result<Certificate> {
    let p = sys.outputs();
    let m = sys.inputs();
    let supply = SupplyRate::new(
        SymmetricMatrix::new(DenseMatrix::scaled_identity(p, -1.0))?,
        DenseMatrix::zeros(p, m),
        SymmetricMatrix::new(DenseMatrix::scaled_identity(m, gamma * gamma))?,
    )?;
    qsr_dissipative(sys, &supply, PsdMode::PositiveDefinite, opts)
}

/// Positive-real wrapper: `(Q, S, R) = (0, ½I, 0)`; square systems only.
pub fn positive_real(sys: &StateSpace, opts: &SolverOptions) -> Result<Certificate> {
    if !sys.is_square() {
        return Err(Error::Precondition("positive realness needs a square system".into()));
    }
    let m = sys.inputs();
    let supply = SupplyRate::new(
        SymmetricMatrix::zeros(m),
        DenseMatrix::scaled_identity(m, 0.5),
        SymmetricMatrix::zeros(m),
    )?;
    qsr_dissipative(sys, &supply, PsdMode::PositiveDefinite, opts)
}

/// Strict positive realness with output-strictness weight ε:
/// `(Q, S, R) = (−εI, ½I, 0)`.
pub fn strictly_positive_real(sys: &StateSpace, epsilon: f64, opts: &SolverOptions) -> Result<Certificate> {
    if !sys.is_square() {
        return Err(Error::Precondition("strict positive realness needs a square system".into()));
    }
    if epsilon <= 0.0 {
        return Err(Error::Precondition("SPR weight must be positive".into()));
    }
    let m = sys.inputs();
    let supply = SupplyRate::new(
        SymmetricMatrix::new(DenseMatrix::scaled_identity(m, -epsilon))?,
        DenseMatrix::scaled_identity(m, 0.5),
        SymmetricMatrix::zeros(m),
    )?;
    qsr_dissipative(sys, &supply, PsdMode::PositiveDefinite, opts)
}

/// Interior-cone wrapper: `(Q, S, R) = (−I, ((a+b)/2)I, −ab·I)`.
pub fn interior_cone_supply(sys: &StateSpace, a: f64, b: f64, opts: &SolverOptions) -> Result<Certificate> {
    if !(a < b) {
        return Err(Error::Precondition("cone needs a < b".into()));
    }
    let m = sys.inputs();
    let supply = SupplyRate::new(
        SymmetricMatrix::new(DenseMatrix::scaled_identity(m, -1.0))?,
        DenseMatrix::scaled_identity(m, 0.5 * (a + b)),
        SymmetricMatrix::new(DenseMatrix::scaled_identity(m, -a * b))?,
    )?;
    qsr_dissipative(sys, &supply, PsdMode::PositiveDefinite, opts)
}

/// Minimum-gain wrapper (exterior cone with `a = −ν, b = ν`):
/// `(Q, S, R) = (I, 0, −ν²I)` with `P ⪰ 0`.
pub fn minimum_gain_supply(sys: &StateSpace, nu: f64, opts: &SolverOptions) -> Result<Certificate> {
    let p = sys.outputs();
    let m = sys.inputs();
    let supply = SupplyRate::new(
        SymmetricMatrix::identity(p),
        DenseMatrix::zeros(p, m),
        SymmetricMatrix::new(DenseMatrix::scaled_identity(m, -nu * nu))?,
    )?;
    qsr_dissipative(sys, &supply, PsdMode::PositiveSemidefinite, opts)
}
