//! Norm certificates: H∞ (bounded-real forms), H2 families, generalized H2,
//! and the peak-to-peak upper bound.

use super::engine::{judge_eps, CertBuilder, MinimizeStatus};
use super::{Certificate, Verdict};
use crate::lmimodel::{AffineExpr, BlockEntry, Objective};
use crate::matcore::{DenseMatrix, Domain};
use crate::oracles::stability_eig;
use crate::sdpsolver::SolverOptions;
use crate::sysmodel::StateSpace;
use crate::{Error, Result};

fn fail_unstable(form: &str, measure: f64) -> Certificate {
    Certificate {
        verdict: Verdict::Fails,
        value: None,
        witnesses: vec![],
        form_used: form.to_string(),
        residual: f64::NAN,
        margin: None,
        notes: vec![format!("system is not stable (measure {measure:.3e}); the norm LMI is infeasible")],
    }
}

/// Equivalent bounded-real formulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum HinfForm {
    /// CT form 1 / DT form 1: analysis variable on the left, γ linear.
    P,
    /// CT form 2 / DT form 2: dual variable, γ linear.
    Dual,
    /// CT form 3: Schur-reduced with γ² linear.
    PSquared,
    /// CT form 4: dual Schur-reduced with γ² linear.
    DualSquared,
    /// CT sufficient dilated form with slack V (dual data pattern).
    DilatedDuan,
    /// CT sufficient dilated form with slack W (primal data pattern).
    DilatedW,
    /// DT form 3: Schur-embedded with `AP`.
    SchurP,
    /// DT form 4: Schur-embedded with `QA`.
    SchurQ,
    /// DT form 7: slack-X form, γ² linear.
    XP,
    /// DT form 8: dual slack-X form, γ² linear.
    XQ,
}

impl HinfForm {
    pub fn supports(&self, domain: Domain) -> bool {
        use HinfForm::*;
        match self {
            P | Dual => true,
            PSquared | DualSquared | DilatedDuan | DilatedW => domain == Domain::Ct,
            SchurP | SchurQ | XP | XQ => domain == Domain::Dt,
        }
    }

    /// Is the form necessary and sufficient (vs. sufficient-only)?
    pub fn is_exact(&self) -> bool {
        !matches!(self, HinfForm::DilatedDuan | HinfForm::DilatedW)
    }

    pub fn name(&self) -> &'static str {
        use HinfForm::*;
        match self {
            P => "brl_p",
            Dual => "brl_dual",
            PSquared => "brl_p_sq",
            DualSquared => "brl_dual_sq",
            DilatedDuan => "brl_dilated_dual",
            DilatedW => "brl_dilated_primal",
            SchurP => "brl_dt_schur_p",
            SchurQ => "brl_dt_schur_q",
            XP => "brl_dt_x_p",
            XQ => "brl_dt_x_q",
        }
    }
}

/// The necessary-and-sufficient form list per domain.
pub fn hinf_exact_forms(domain: Domain) -> Vec<HinfForm> {
    use HinfForm::*;
    match domain {
        Domain::Ct => vec![P, Dual, PSquared, DualSquared],
        Domain::Dt => vec![P, Dual, SchurP, SchurQ, XP, XQ],
    }
}

/// H∞-norm certificate: minimizes γ over the chosen bounded-real form.
/// Unstable systems make every form infeasible and come back as `Fails`.
pub fn hinf_norm(sys: &StateSpace, form: HinfForm, opts: &SolverOptions) -> Result<Certificate> {
    if !form.supports(sys.domain) {
        return Err(Error::Precondition(format!("{:?} undefined for {:?}", form, sys.domain)));
    }
    let stab = stability_eig(&sys.a, sys.domain)?;
    if !stab.stable {
        return Ok(fail_unstable(form.name(), stab.measure));
    }
    let n = sys.order();
    let (m, p) = (sys.inputs(), sys.outputs());
    let a = &sys.a;
    let at = sys.a.transpose();
    let b = &sys.b;
    let c = &sys.c;
    let d = &sys.d;
    let scale = a.frob_norm().max(b.frob_norm()).max(c.frob_norm()).max(1.0);
    let eps = judge_eps(scale);
    let mut cb = CertBuilder::new(eps);
    let squared = matches!(form, HinfForm::PSquared | HinfForm::DualSquared | HinfForm::XP | HinfForm::XQ);
    let g = cb.prob.scalar("gamma")?;
    use HinfForm::*;
    match (sys.domain, form) {
        (Domain::Ct, P) => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(&pe.rmul(a) + &pe.lmul(&at)),
                    BlockEntry::E(pe.rmul(b)),
                    BlockEntry::E(AffineExpr::constant(c.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m).neg()),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p).neg()),
                ],
            ])?;
            cb.hard(pe.neg(), eps, "P pd");
            cb.hard(block, eps, "brl");
        }
        (Domain::Ct, Dual) => {
            let qv = cb.prob.symmetric(n, "Q")?;
            cb.watch("Q", qv);
            let qe = AffineExpr::var(qv);
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(&qe.lmul(a) + &qe.rmul(&at)),
                    BlockEntry::E(AffineExpr::constant(b.clone())),
                    BlockEntry::E(qe.rmul(&c.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m).neg()),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p).neg()),
                ],
            ])?;
            cb.hard(qe.neg(), eps, "Q pd");
            cb.hard(block, eps, "brl dual");
        }
        (Domain::Ct, PSquared) => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let tl = &(&pe.rmul(a) + &pe.lmul(&at)) + &AffineExpr::constant(&c.transpose() * c);
            let tr = &pe.rmul(b) + &AffineExpr::constant(&c.transpose() * d);
            let br = &AffineExpr::scalar_times_identity(g, m).neg()
                + &AffineExpr::constant(&d.transpose() * d);
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(tl), BlockEntry::E(tr)],
                vec![BlockEntry::Mirror, BlockEntry::E(br)],
            ])?;
            cb.hard(pe.neg(), eps, "P pd");
            cb.hard(block, eps, "brl squared");
        }
        (Domain::Ct, DualSquared) => {
            let qv = cb.prob.symmetric(n, "Q")?;
            cb.watch("Q", qv);
            let qe = AffineExpr::var(qv);
            let tl = &(&qe.lmul(a) + &qe.rmul(&at)) + &AffineExpr::constant(b * &b.transpose());
            let tr = &qe.rmul(&c.transpose()) + &AffineExpr::constant(b * &d.transpose());
            let br = &AffineExpr::scalar_times_identity(g, p).neg()
                + &AffineExpr::constant(d * &d.transpose());
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(tl), BlockEntry::E(tr)],
                vec![BlockEntry::Mirror, BlockEntry::E(br)],
            ])?;
            cb.hard(qe.neg(), eps, "Q pd");
            cb.hard(block, eps, "brl dual squared");
        }
        (Domain::Ct, DilatedDuan) => {
            let qv = cb.prob.symmetric(n, "Q")?;
            let vv = cb.prob.rectangular(n, n, "V")?;
            cb.watch("Q", qv);
            cb.watch("V", vv);
            let qe = AffineExpr::var(qv);
            let ve = AffineExpr::var(vv);
            let vte = AffineExpr::var_t(vv);
            let z = AffineExpr::zero;
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(ve.he().neg()),
                    BlockEntry::E(&vte.rmul(&at) + &qe),
                    BlockEntry::E(vte.rmul(&c.transpose())),
                    BlockEntry::E(vte.clone()),
                    BlockEntry::zero(n, m),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(qe.neg()),
                    BlockEntry::zero(n, p),
                    BlockEntry::zero(n, n),
                    BlockEntry::E(AffineExpr::constant(b.clone())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p).neg()),
                    BlockEntry::zero(p, n),
                    BlockEntry::E(AffineExpr::constant(d.clone())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(qe.neg()),
                    BlockEntry::E(z(n, m)),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m).neg()),
                ],
            ])?;
            cb.hard(qe.neg(), eps, "Q pd");
            cb.hard(block, eps, "brl dilated dual");
        }
        (Domain::Ct, DilatedW) => {
            let pv = cb.prob.symmetric(n, "P")?;
            let wv = cb.prob.rectangular(n, n, "W")?;
            cb.watch("P", pv);
            cb.watch("W", wv);
            let pe = AffineExpr::var(pv);
            let we = AffineExpr::var(wv);
            let wte = AffineExpr::var_t(wv);
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(we.he().neg()),
                    BlockEntry::E(&wte.rmul(a) + &pe),
                    BlockEntry::E(wte.rmul(b)),
                    BlockEntry::E(wte.clone()),
                    BlockEntry::zero(n, p),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(pe.neg()),
                    BlockEntry::zero(n, m),
                    BlockEntry::zero(n, n),
                    BlockEntry::E(AffineExpr::constant(c.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m).neg()),
                    BlockEntry::zero(m, n),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(pe.neg()),
                    BlockEntry::zero(n, p),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p).neg()),
                ],
            ])?;
            cb.hard(pe.neg(), eps, "P pd");
            cb.hard(block, eps, "brl dilated primal");
        }
        (Domain::Dt, P) => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let tl = &pe.lmul(&at).rmul(a) - &pe;
            let tm = pe.lmul(&at).rmul(b);
            let mm = &pe.lmul(&b.transpose()).rmul(b) - &AffineExpr::scalar_times_identity(g, m);
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(tl),
                    BlockEntry::E(tm),
                    BlockEntry::E(AffineExpr::constant(c.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(mm),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p).neg()),
                ],
            ])?;
            cb.hard(pe.neg(), eps, "P pd");
            cb.hard(block, eps, "brl dt");
        }
        (Domain::Dt, Dual) => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let tl = &pe.lmul(a).rmul(&at) - &pe;
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(tl),
                    BlockEntry::E(AffineExpr::constant(b.clone())),
                    BlockEntry::E(pe.lmul(a).rmul(&c.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m).neg()),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(
                        &pe.lmul(c).rmul(&c.transpose()) - &AffineExpr::scalar_times_identity(g, p),
                    ),
                ],
            ])?;
            cb.hard(pe.neg(), eps, "P pd");
            cb.hard(block, eps, "brl dt dual");
        }
        (Domain::Dt, SchurP) | (Domain::Dt, SchurQ) => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let (c12, c14, c24) = if form == SchurP {
                (pe.lmul(a), pe.rmul(&c.transpose()), AffineExpr::constant(b.clone()))
            } else {
                (pe.rmul(a), AffineExpr::constant(c.transpose()), pe.rmul(b))
            };
            // layout: rows (x', x, w, z)
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(pe.clone()),
                    BlockEntry::E(c12),
                    BlockEntry::E(c24.clone()),
                    BlockEntry::zero(n, p),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(pe.clone()),
                    BlockEntry::zero(n, m),
                    BlockEntry::E(c14),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, m)),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p)),
                ],
            ])?;
            cb.hard(block.neg(), eps, "brl dt schur");
        }
        (Domain::Dt, XP) | (Domain::Dt, XQ) => {
            let pv = cb.prob.symmetric(n, "P")?;
            let xv = cb.prob.rectangular(n, n, "X")?;
            cb.watch("P", pv);
            cb.watch("X", xv);
            let pe = AffineExpr::var(pv);
            let xe = AffineExpr::var(xv);
            let xt = AffineExpr::var_t(xv);
            let slack = &(&xe + &xt) - &pe;
            let (b11, b12, b13, b22, b24) = if form == XP {
                (
                    pe.clone(),
                    xe.lmul(a),
                    AffineExpr::constant(b.clone()),
                    slack.clone(),
                    xt.rmul(&c.transpose()),
                )
            } else {
                (
                    slack.clone(),
                    xe.rmul(a),
                    xe.rmul(b),
                    pe.clone(),
                    AffineExpr::constant(c.transpose()),
                )
            };
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(b11),
                    BlockEntry::E(b12),
                    BlockEntry::E(b13),
                    BlockEntry::zero(n, p),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(b22),
                    BlockEntry::zero(n, m),
                    BlockEntry::E(b24),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::identity(m)),
                    BlockEntry::E(AffineExpr::constant(d.transpose())),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(g, p)),
                ],
            ])?;
            cb.hard(block.neg(), eps, "brl dt x");
        }
        _ => unreachable!("support checked"),
    }
    // γ > 0 (and for the squared forms, ν = γ² ≥ 0)
    cb.hard(AffineExpr::var(g).neg(), 0.0, "gamma nonneg");
    let out = cb.minimize(Objective::scalar(g), form.name(), opts)?;
    if out.status == MinimizeStatus::Optimal {
        let mut cert = out.into_certificate(|v| if squared { v.max(0.0).sqrt() } else { v });
        if !form.is_exact() {
            cert.notes.push("sufficient-only form: value is an upper bound".into());
        }
        Ok(cert)
    } else {
        Ok(out.into_certificate(|v| v))
    }
}

/// H2 condition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum H2Form {
    /// CT: controllability Gramian route (trace of CXCᵀ).
    Ctrb,
    /// CT: observability Gramian route (trace of BᵀYB).
    Obsv,
    /// CT: Z-coupled route (Schur-reduced quadratic form).
    Coupled,
    /// CT: trace-linked form with μ linear, observability side.
    TraceObsv,
    /// CT: trace-linked form with μ linear, controllability side.
    TraceCtrb,
    /// CT: dilated slack-V form (control pattern).
    DilatedCtrb,
    /// CT: dilated slack-V form (observer pattern).
    DilatedObsv,
    /// DT: form with P on the left.
    DtP,
    /// DT: dual form with Q.
    DtQ,
    /// DT: slack-X form.
    DtXP,
    /// DT: dual slack-X form.
    DtXQ,
}

impl H2Form {
    pub fn supports(&self, domain: Domain) -> bool {
        use H2Form::*;
        match self {
            Ctrb | Obsv | Coupled | TraceObsv | TraceCtrb | DilatedCtrb | DilatedObsv => {
                domain == Domain::Ct
            }
            DtP | DtQ | DtXP | DtXQ => domain == Domain::Dt,
        }
    }

    pub fn name(&self) -> &'static str {
        use H2Form::*;
        match self {
            Ctrb => "h2_ctrb",
            Obsv => "h2_obsv",
            Coupled => "h2_coupled",
            TraceObsv => "h2_trace_obsv",
            TraceCtrb => "h2_trace_ctrb",
            DilatedCtrb => "h2_dilated_ctrb",
            DilatedObsv => "h2_dilated_obsv",
            DtP => "h2_dt_p",
            DtQ => "h2_dt_q",
            DtXP => "h2_dt_xp",
            DtXQ => "h2_dt_xq",
        }
    }
}

pub fn h2_forms(domain: Domain) -> Vec<H2Form> {
    use H2Form::*;
    match domain {
        Domain::Ct => vec![Ctrb, Obsv, Coupled, TraceObsv, TraceCtrb, DilatedCtrb, DilatedObsv],
        Domain::Dt => vec![DtP, DtQ, DtXP, DtXQ],
    }
}

/// H2-norm certificate; requires a strictly proper stable realization.
pub fn h2_norm(sys: &StateSpace, form: H2Form, opts: &SolverOptions) -> Result<Certificate> {
    if sys.d.frob_norm() > 0.0 {
        return Err(Error::UnboundedH2("nonzero feedthrough".into()));
    }
    if !form.supports(sys.domain) {
        return Err(Error::Precondition(format!("{:?} undefined for {:?}", form, sys.domain)));
    }
    let stab = stability_eig(&sys.a, sys.domain)?;
    if !stab.stable {
        return Ok(fail_unstable(form.name(), stab.measure));
    }
    let n = sys.order();
    let (m, p) = (sys.inputs(), sys.outputs());
    let a = &sys.a;
    let at = sys.a.transpose();
    let b = &sys.b;
    let c = &sys.c;
    let scale = a.frob_norm().max(b.frob_norm()).max(c.frob_norm()).max(1.0);
    let eps = judge_eps(scale);
    let mut cb = CertBuilder::new(eps);
    let nu = cb.prob.scalar("nu")?;
    // value transform: every form below is linear in ν = μ² except the two
    // CT trace-linked forms, where μ itself is the variable
    let mut nu_is_mu = false;
    use H2Form::*;
    match (sys.domain, form) {
        (Domain::Ct, Ctrb) => {
            let x = cb.prob.symmetric(n, "X")?;
            cb.watch("X", x);
            let xe = AffineExpr::var(x);
            cb.hard(xe.neg(), eps, "X pd");
            cb.hard(
                &(&xe.lmul(a) + &xe.rmul(&at)) + &AffineExpr::constant(b * &b.transpose()),
                eps,
                "gramian",
            );
            let trace = AffineExpr::trace_of(c, x, &c.transpose());
            cb.hard(&trace - &AffineExpr::var(nu), 0.0, "trace");
        }
        (Domain::Ct, Obsv) => {
            let y = cb.prob.symmetric(n, "Y")?;
            cb.watch("Y", y);
            let ye = AffineExpr::var(y);
            cb.hard(ye.neg(), eps, "Y pd");
            cb.hard(
                &(&ye.rmul(a) + &ye.lmul(&at)) + &AffineExpr::constant(&c.transpose() * c),
                eps,
                "gramian",
            );
            let trace = AffineExpr::trace_of(&b.transpose(), y, b);
            cb.hard(&trace - &AffineExpr::var(nu), 0.0, "trace");
        }
        (Domain::Ct, Coupled) => {
            let x = cb.prob.symmetric(n, "X")?;
            let z = cb.prob.symmetric(m, "Z")?;
            cb.watch("X", x);
            cb.watch("Z", z);
            let xe = AffineExpr::var(x);
            // AX + XAᵀ + XCᵀCX ≺ 0, Schur-reduced
            let lyap = AffineExpr::block(&[
                vec![BlockEntry::E(&xe.lmul(a) + &xe.rmul(&at)), BlockEntry::E(xe.rmul(&c.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::identity(p).neg())],
            ])?;
            cb.hard(lyap, eps, "gramian schur");
            let couple = AffineExpr::block(&[
                vec![BlockEntry::E(AffineExpr::var(z)), BlockEntry::E(AffineExpr::constant(b.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(xe.clone())],
            ])?;
            cb.hard(couple.neg(), eps, "coupling");
            let mut tr_z = AffineExpr::zero(1, 1);
            for i in 0..m {
                let e = {
                    let mut v = DenseMatrix::zeros(1, m);
                    v.set(0, i, 1.0);
                    v
                };
                tr_z = &tr_z + &AffineExpr::var(z).lmul(&e).rmul(&e.transpose());
            }
            cb.hard(&tr_z - &AffineExpr::var(nu), 0.0, "trace");
        }
        (Domain::Ct, TraceObsv) | (Domain::Ct, TraceCtrb) => {
            nu_is_mu = true;
            let (zdim, lyap, couple) = if form == TraceObsv {
                let y = cb.prob.symmetric(n, "Y")?;
                let z = cb.prob.symmetric(p, "Z")?;
                cb.watch("Y", y);
                cb.watch("Z", z);
                let ye = AffineExpr::var(y);
                let lyap = AffineExpr::block(&[
                    vec![BlockEntry::E(&ye.rmul(a) + &ye.lmul(&at)), BlockEntry::E(ye.rmul(b))],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::E(AffineExpr::scalar_times_identity(nu, m).neg()),
                    ],
                ])?;
                let couple = AffineExpr::block(&[
                    vec![BlockEntry::E(ye.clone()), BlockEntry::E(AffineExpr::constant(c.transpose()))],
                    vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::var(z))],
                ])?;
                (p, lyap, couple)
            } else {
                let x = cb.prob.symmetric(n, "X")?;
                let z = cb.prob.symmetric(m, "Z")?;
                cb.watch("X", x);
                cb.watch("Z", z);
                let xe = AffineExpr::var(x);
                let lyap = AffineExpr::block(&[
                    vec![
                        BlockEntry::E(&xe.rmul(&at) + &xe.lmul(a)),
                        BlockEntry::E(xe.rmul(&c.transpose())),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::E(AffineExpr::scalar_times_identity(nu, p).neg()),
                    ],
                ])?;
                let couple = AffineExpr::block(&[
                    vec![BlockEntry::E(xe.clone()), BlockEntry::E(AffineExpr::constant(b.clone()))],
                    vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::var(z))],
                ])?;
                (m, lyap, couple)
            };
            cb.hard(lyap, eps, "norm block");
            cb.hard(couple.neg(), eps, "coupling");
            let z = cb.prob.variables().iter().find(|v| v.name == "Z").unwrap();
            let zref = crate::lmimodel::VarRef { id: z.id, kind: z.kind };
            let tr_z = AffineExpr::trace_of(&DenseMatrix::identity(zdim), zref, &DenseMatrix::identity(zdim));
            cb.hard(&tr_z - &AffineExpr::var(nu), 0.0, "trace");
        }
        (Domain::Ct, DilatedCtrb) | (Domain::Ct, DilatedObsv) => {
            let x = cb.prob.symmetric(n, "X")?;
            let v = cb.prob.rectangular(n, n, "V")?;
            let zdim = if form == DilatedCtrb { m } else { p };
            let z = cb.prob.symmetric(zdim, "Z")?;
            cb.watch("X", x);
            cb.watch("V", v);
            cb.watch("Z", z);
            let xe = AffineExpr::var(x);
            let vte = AffineExpr::var_t(v);
            let (c12, c13, couple_offdiag, chan_dim) = if form == DilatedCtrb {
                // He{VᵀA}… pattern with B channel and C-coupling
                (
                    &vte.rmul(a) + &xe,
                    vte.rmul(b),
                    AffineExpr::constant(c.transpose()),
                    m,
                )
            } else {
                (
                    &vte.rmul(&at) + &xe,
                    vte.rmul(&c.transpose()),
                    AffineExpr::constant(b.clone()),
                    p,
                )
            };
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(AffineExpr::var(v).he().neg()),
                    BlockEntry::E(c12),
                    BlockEntry::E(c13),
                    BlockEntry::E(vte.clone()),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(xe.neg()),
                    BlockEntry::zero(n, chan_dim),
                    BlockEntry::zero(n, n),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(nu, chan_dim).neg()),
                    BlockEntry::zero(chan_dim, n),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(xe.neg()),
                ],
            ])?;
            cb.hard(block, eps, "dilated block");
            let couple = AffineExpr::block(&[
                vec![BlockEntry::E(xe.clone()), BlockEntry::E(couple_offdiag)],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::var(z))],
            ])?;
            cb.hard(couple.neg(), eps, "coupling");
            let tr_z =
                AffineExpr::trace_of(&DenseMatrix::identity(zdim), z, &DenseMatrix::identity(zdim));
            cb.hard(
                &tr_z - &AffineExpr::constant(DenseMatrix::scalar(1.0)),
                0.0,
                "trace below one",
            );
        }
        (Domain::Dt, DtP) | (Domain::Dt, DtQ) => {
            let pvar = cb.prob.symmetric(n, "P")?;
            let z = cb.prob.symmetric(p, "Z")?;
            cb.watch("P", pvar);
            cb.watch("Z", z);
            let pe = AffineExpr::var(pvar);
            let (c12, c13, zoff) = if form == DtP {
                (pe.lmul(a), AffineExpr::constant(b.clone()), pe.lmul(c))
            } else {
                (pe.rmul(a), pe.rmul(b), AffineExpr::constant(c.clone()))
            };
            let main = AffineExpr::block(&[
                vec![BlockEntry::E(pe.clone()), BlockEntry::E(c12), BlockEntry::E(c13)],
                vec![BlockEntry::Mirror, BlockEntry::E(pe.clone()), BlockEntry::zero(n, m)],
                vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(AffineExpr::identity(m))],
            ])?;
            cb.hard(main.neg(), eps, "dt gramian");
            let couple = AffineExpr::block(&[
                vec![BlockEntry::E(AffineExpr::var(z)), BlockEntry::E(zoff)],
                vec![BlockEntry::Mirror, BlockEntry::E(pe.clone())],
            ])?;
            cb.hard(couple.neg(), eps, "coupling");
            let tr_z = AffineExpr::trace_of(&DenseMatrix::identity(p), z, &DenseMatrix::identity(p));
            cb.hard(&tr_z - &AffineExpr::var(nu), 0.0, "trace");
        }
        (Domain::Dt, DtXP) | (Domain::Dt, DtXQ) => {
            let pvar = cb.prob.symmetric(n, "P")?;
            let xv = cb.prob.rectangular(n, n, "X")?;
            let z = cb.prob.symmetric(p, "Z")?;
            cb.watch("P", pvar);
            cb.watch("X", xv);
            cb.watch("Z", z);
            let pe = AffineExpr::var(pvar);
            let xe = AffineExpr::var(xv);
            let xt = AffineExpr::var_t(xv);
            let slack = &(&xe + &xt) - &pe;
            let (b11, b12, b13, b22, zoff, zdiag) = if form == DtXP {
                (
                    pe.clone(),
                    xe.lmul(a),
                    AffineExpr::constant(b.clone()),
                    slack.clone(),
                    xt.lmul(c),
                    slack.clone(),
                )
            } else {
                (
                    slack.clone(),
                    xt.rmul(a),
                    xt.rmul(b),
                    pe.clone(),
                    AffineExpr::constant(c.clone()),
                    pe.clone(),
                )
            };
            let main = AffineExpr::block(&[
                vec![BlockEntry::E(b11), BlockEntry::E(b12), BlockEntry::E(b13)],
                vec![BlockEntry::Mirror, BlockEntry::E(b22), BlockEntry::zero(n, m)],
                vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(AffineExpr::identity(m))],
            ])?;
            cb.hard(main.neg(), eps, "dt gramian");
            let couple = AffineExpr::block(&[
                vec![BlockEntry::E(AffineExpr::var(z)), BlockEntry::E(zoff)],
                vec![BlockEntry::Mirror, BlockEntry::E(zdiag)],
            ])?;
            cb.hard(couple.neg(), eps, "coupling");
            let tr_z = AffineExpr::trace_of(&DenseMatrix::identity(p), z, &DenseMatrix::identity(p));
            cb.hard(&tr_z - &AffineExpr::var(nu), 0.0, "trace");
        }
        _ => unreachable!(),
    }
    cb.hard(AffineExpr::var(nu).neg(), 0.0, "nu nonneg");
    let out = cb.minimize(Objective::scalar(nu), form.name(), opts)?;
    Ok(out.into_certificate(|v| if nu_is_mu { v } else { v.max(0.0).sqrt() }))
}

/// Generalized H2 formulations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GenH2Form {
    Primal,
    Dual,
    Dilated,
}

/// Generalized H2 norm (energy-to-peak) certificate; CT, strictly proper.
pub fn generalized_h2_norm(sys: &StateSpace, form: GenH2Form, opts: &SolverOptions) -> Result<Certificate> {
    if sys.domain != Domain::Ct {
        return Err(Error::Precondition("generalized H2 is defined for CT systems here".into()));
    }
    if sys.d.frob_norm() > 0.0 {
        return Err(Error::UnboundedH2("nonzero feedthrough".into()));
    }
    let stab = stability_eig(&sys.a, sys.domain)?;
    if !stab.stable {
        return Ok(fail_unstable("gen_h2", stab.measure));
    }
    let n = sys.order();
    let (m, p) = (sys.inputs(), sys.outputs());
    let a = &sys.a;
    let at = sys.a.transpose();
    let b = &sys.b;
    let c = &sys.c;
    let eps = judge_eps(a.frob_norm().max(1.0));
    let mut cb = CertBuilder::new(eps);
    let mu = cb.prob.scalar("mu")?;
    match form {
        GenH2Form::Primal => {
            let pv = cb.prob.symmetric(n, "P")?;
            cb.watch("P", pv);
            let pe = AffineExpr::var(pv);
            let lyap = AffineExpr::block(&[
                vec![BlockEntry::E(&pe.lmul(&at) + &pe.rmul(a)), BlockEntry::E(pe.rmul(b))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(mu, m).neg())],
            ])?;
            cb.hard(lyap, eps, "energy block");
            let peak = AffineExpr::block(&[
                vec![BlockEntry::E(pe.clone()), BlockEntry::E(AffineExpr::constant(c.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(mu, p))],
            ])?;
            cb.hard(peak.neg(), eps, "peak block");
        }
        GenH2Form::Dual => {
            let qv = cb.prob.symmetric(n, "Q")?;
            cb.watch("Q", qv);
            let qe = AffineExpr::var(qv);
            let lyap = AffineExpr::block(&[
                vec![BlockEntry::E(&qe.rmul(&at) + &qe.lmul(a)), BlockEntry::E(AffineExpr::constant(b.clone()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(mu, m).neg())],
            ])?;
            cb.hard(lyap, eps, "energy block");
            let peak = AffineExpr::block(&[
                vec![BlockEntry::E(qe.clone()), BlockEntry::E(qe.rmul(&c.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(mu, p))],
            ])?;
            cb.hard(peak.neg(), eps, "peak block");
        }
        GenH2Form::Dilated => {
            let pv = cb.prob.symmetric(n, "P")?;
            let vv = cb.prob.rectangular(n, n, "V")?;
            cb.watch("P", pv);
            cb.watch("V", vv);
            let pe = AffineExpr::var(pv);
            let vte = AffineExpr::var_t(vv);
            let block = AffineExpr::block(&[
                vec![
                    BlockEntry::E(AffineExpr::var(vv).he().neg()),
                    BlockEntry::E(&vte.rmul(a) + &pe),
                    BlockEntry::E(vte.rmul(b)),
                    BlockEntry::E(vte.clone()),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(pe.neg()),
                    BlockEntry::zero(n, m),
                    BlockEntry::zero(n, n),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::scalar_times_identity(mu, m).neg()),
                    BlockEntry::zero(m, n),
                ],
                vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(pe.neg())],
            ])?;
            cb.hard(block, eps, "dilated energy block");
            let peak = AffineExpr::block(&[
                vec![BlockEntry::E(pe.clone()), BlockEntry::E(AffineExpr::constant(c.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(mu, p))],
            ])?;
            cb.hard(peak.neg(), eps, "peak block");
        }
    }
    cb.hard(AffineExpr::var(mu).neg(), 0.0, "mu nonneg");
    let out = cb.minimize(Objective::scalar(mu), "gen_h2", opts)?;
    Ok(out.into_certificate(|v| v))
}

/// Peak-to-peak (L∞-gain) upper bound: joint search over the bilinear λ by
/// a logarithmic grid with golden-section refinement, solving the two-block
/// LMI in `(P, ε, μ)` at each fixed λ. Upper bound only.
pub fn peak_to_peak_bound(sys: &StateSpace, opts: &SolverOptions) -> Result<Certificate> {
    if sys.domain != Domain::Ct {
        return Err(Error::Precondition("peak-to-peak bound is CT-only here".into()));
    }
    let stab = stability_eig(&sys.a, sys.domain)?;
    if !stab.stable {
        return Ok(fail_unstable("peak_to_peak", stab.measure));
    }
    let lam_max = 2.0 * stab.measure.abs();
    let mu_at = |lam: f64| -> Result<Option<(f64, Vec<(String, DenseMatrix)>)>> {
        let n = sys.order();
        let (m, p) = (sys.inputs(), sys.outputs());
        let a = &sys.a;
        let at = sys.a.transpose();
        let eps = judge_eps(sys.a.frob_norm().max(1.0));
        let mut cb = CertBuilder::new(eps);
        let pv = cb.prob.symmetric(n, "P")?;
        let epsv = cb.prob.scalar("eps")?;
        let muv = cb.prob.scalar("mu")?;
        cb.watch("P", pv);
        let pe = AffineExpr::var(pv);
        let l1 = AffineExpr::block(&[
            vec![
                BlockEntry::E(&(&pe.lmul(&at) + &pe.rmul(a)) + &pe.scale(lam)),
                BlockEntry::E(pe.rmul(&sys.b)),
            ],
            vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(epsv, m).neg())],
        ])?;
        cb.hard(l1, eps, "decay block");
        let l2 = AffineExpr::block(&[
            vec![
                BlockEntry::E(pe.scale(lam)),
                BlockEntry::zero(n, m),
                BlockEntry::E(AffineExpr::constant(sys.c.transpose())),
            ],
            vec![
                BlockEntry::Mirror,
                BlockEntry::E(
                    &AffineExpr::scalar_times_identity(muv, m) - &AffineExpr::scalar_times_identity(epsv, m),
                ),
                BlockEntry::E(AffineExpr::constant(sys.d.transpose())),
            ],
            vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(AffineExpr::scalar_times_identity(muv, p))],
        ])?;
        cb.hard(l2.neg(), eps, "peak block");
        cb.hard(AffineExpr::var(pv).neg(), eps, "P pd");
        cb.hard(AffineExpr::var(epsv).neg(), 0.0, "eps nonneg");
        let out = cb.minimize(Objective::scalar(muv), "peak_to_peak", opts)?;
        if out.status == MinimizeStatus::Optimal {
            Ok(Some((out.value, out.witnesses)))
        } else {
            Ok(None)
        }
    };
    let grid_n = 40;
    let mut best: Option<(f64, f64, Vec<(String, DenseMatrix)>)> = None;
    let (lo_log, hi_log) = ((0.005 * lam_max).ln(), (0.995 * lam_max).ln());
    let mut lambdas: Vec<f64> = (0..grid_n)
        .map(|k| (lo_log + (hi_log - lo_log) * k as f64 / (grid_n - 1) as f64).exp())
        .collect();
    for &lam in &lambdas {
        if let Some((mu, w)) = mu_at(lam)? {
            if best.as_ref().map_or(true, |(_, b, _)| mu < *b) {
                best = Some((lam, mu, w));
            }
        }
    }
    let Some((lam_star, _, _)) = best.as_ref().map(|(l, m, _)| (*l, *m, ())) else {
        return Ok(Certificate {
            verdict: Verdict::Inconclusive,
            value: None,
            witnesses: vec![],
            form_used: "peak_to_peak".into(),
            residual: f64::NAN,
            margin: None,
            notes: vec!["every λ grid point was infeasible".into()],
        });
    };
    // golden-section refinement around the best grid point
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = lambdas.iter().position(|&l| l == lam_star).unwrap();
    let mut lo = if idx == 0 { lambdas[0] * 0.5 } else { lambdas[idx - 1] };
    let mut hi = if idx + 1 == lambdas.len() { lambdas[idx] } else { lambdas[idx + 1] };
    let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
    for _ in 0..12 {
        let x1 = lo + phi * (hi - lo);
        let x2 = hi - phi * (hi - lo);
        let f1 = mu_at(x1)?.map(|(m, w)| (m, w));
        let f2 = mu_at(x2)?.map(|(m, w)| (m, w));
        match (f1, f2) {
            (Some((m1, w1)), Some((m2, w2))) => {
                if m1 < m2 {
                    hi = x2;
                    if best.as_ref().map_or(true, |(_, b, _)| m1 < *b) {
                        best = Some((x1, m1, w1));
                    }
                } else {
                    lo = x1;
                    if best.as_ref().map_or(true, |(_, b, _)| m2 < *b) {
                        best = Some((x2, m2, w2));
                    }
                }
            }
            (Some((m1, w1)), None) => {
                hi = x2;
                if best.as_ref().map_or(true, |(_, b, _)| m1 < *b) {
                    best = Some((x1, m1, w1));
                }
            }
            (None, Some((m2, w2))) => {
                lo = x1;
                if best.as_ref().map_or(true, |(_, b, _)| m2 < *b) {
                    best = Some((x2, m2, w2));
                }
            }
            (None, None) => break,
        }
    }
    let (lam, mu, witnesses) = best.unwrap();
    Ok(Certificate {
        verdict: Verdict::Holds,
        value: Some(mu),
        witnesses,
        form_used: "peak_to_peak".into(),
        residual: f64::NAN,
        margin: None,
        notes: vec![
            "upper bound only (sufficient conditions with a λ grid)".into(),
            format!("λ* = {lam:.6e}"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{h2_oracle, hinf_oracle};

    fn lag() -> StateSpace {
        StateSpace::siso(-1.0, 1.0, 1.0, 0.0, Domain::Ct)
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn lag_hinf_value_one_in_all_exact_ct_forms() {
        for form in hinf_exact_forms(Domain::Ct) {
            let cert = hinf_norm(&lag(), form, &opts()).unwrap();
            assert_eq!(cert.verdict, Verdict::Holds, "{:?}", form);
            let v = cert.value.unwrap();
            assert!((v - 1.0).abs() < 2e-5, "{:?} gave {v}", form);
        }
    }

    #[test]
    fn d_only_system_hinf_is_sigma_max() {
        let sys = StateSpace::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::zeros(1, 2),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]),
            Domain::Ct,
        )
        .unwrap();
        let cert = hinf_norm(&sys, HinfForm::P, &opts()).unwrap();
        assert!((cert.value.unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn unstable_system_fails() {
        let sys = StateSpace::siso(1.0, 1.0, 1.0, 0.0, Domain::Ct);
        let cert = hinf_norm(&sys, HinfForm::P, &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
    }

    #[test]
    fn dilated_forms_dominate_exact_value() {
        let sys = lag();
        let exact = hinf_norm(&sys, HinfForm::P, &opts()).unwrap().value.unwrap();
        for form in [HinfForm::DilatedDuan, HinfForm::DilatedW] {
            let cert = hinf_norm(&sys, form, &opts()).unwrap();
            assert_eq!(cert.verdict, Verdict::Holds, "{form:?}");
            assert!(cert.value.unwrap() >= exact - 1e-6, "{form:?}");
        }
    }

    #[test]
    fn dt_forms_agree_with_oracle() {
        let sys = StateSpace::siso(0.5, 1.0, 1.0, 0.2, Domain::Dt);
        let oracle = hinf_oracle(&sys).unwrap();
        for form in hinf_exact_forms(Domain::Dt) {
            let cert = hinf_norm(&sys, form, &opts()).unwrap();
            let v = cert.value.unwrap();
            assert!(
                (v - oracle).abs() <= 2e-4 * oracle,
                "{:?}: {v} vs oracle {oracle}",
                form
            );
        }
    }

    #[test]
    fn lag_h2_value_in_all_ct_forms() {
        let expected = 0.5_f64.sqrt();
        for form in h2_forms(Domain::Ct) {
            let cert = h2_norm(&lag(), form, &opts()).unwrap();
            assert_eq!(cert.verdict, Verdict::Holds, "{:?}", form);
            let v = cert.value.unwrap();
            assert!((v - expected).abs() < 2e-5 * expected.max(1.0), "{:?} gave {v}", form);
        }
    }

    #[test]
    fn zero_output_h2_is_zero() {
        let sys = StateSpace::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            Domain::Ct,
        )
        .unwrap();
        let cert = h2_norm(&sys, H2Form::Ctrb, &opts()).unwrap();
        assert!(cert.value.unwrap() < 1e-4);
    }

    #[test]
    fn dt_h2_forms_agree_with_gramian() {
        let sys = StateSpace::siso(0.5, 1.0, 1.0, 0.0, Domain::Dt);
        let oracle = h2_oracle(&sys).unwrap();
        for form in h2_forms(Domain::Dt) {
            let cert = h2_norm(&sys, form, &opts()).unwrap();
            let v = cert.value.unwrap();
            assert!((v - oracle).abs() < 1e-5 * oracle, "{:?}: {v} vs {oracle}", form);
        }
    }

    #[test]
    fn feedthrough_rejected_for_h2() {
        let sys = StateSpace::siso(-1.0, 1.0, 1.0, 0.1, Domain::Ct);
        assert!(matches!(h2_norm(&sys, H2Form::Ctrb, &opts()), Err(Error::UnboundedH2(_))));
    }

    #[test]
    fn generalized_h2_siso_equals_h2() {
        // SISO: generalized H2 equals the H2 norm (impulse-response energy)
        let expected = 0.5_f64.sqrt();
        for form in [GenH2Form::Primal, GenH2Form::Dual, GenH2Form::Dilated] {
            let cert = generalized_h2_norm(&lag(), form, &opts()).unwrap();
            let v = cert.value.unwrap();
            assert!((v - expected).abs() < 2e-5, "{:?} gave {v}", form);
        }
        let c0 = StateSpace::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            Domain::Ct,
        )
        .unwrap();
        let cert = generalized_h2_norm(&c0, GenH2Form::Primal, &opts()).unwrap();
        assert!(cert.value.unwrap() < 1e-4);
    }

    #[test]
    fn peak_to_peak_dominates_l1_norm_for_lag() {
        // ∫|h| = 1 for the lag; certified bound within [1, 2.01]
        let cert = peak_to_peak_bound(&lag(), &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        let v = cert.value.unwrap();
        assert!(v >= 1.0 - 1e-6 && v <= 2.01, "bound {v}");
        // and it dominates the H∞ norm
        let hinf = hinf_oracle(&lag()).unwrap();
        assert!(v >= hinf - 1e-6);
    }

    #[test]
    fn peak_to_peak_static_gain() {
        // memoryless system: bound approaches σ̄(D) for large λ
        let sys = StateSpace::new(
            DenseMatrix::scalar(-5.0),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::scalar(1.5),
            Domain::Ct,
        )
        .unwrap();
        let cert = peak_to_peak_bound(&sys, &opts()).unwrap();
        let v = cert.value.unwrap();
        assert!(v >= 1.5 - 1e-5 && v <= 1.6, "bound {v}");
    }
}
