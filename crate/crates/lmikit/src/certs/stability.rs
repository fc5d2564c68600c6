//! Asymptotic-stability certificates (Hurwitz/Schur) in every equivalent
//! LMI formulation the toolkit supports: primal/dual Lyapunov inequalities,
//! the S-variable form, the reciprocal-projection and dilated forms (CT),
//! the four Schur-embedded forms and the G-variable form (DT).

use super::engine::{judge_eps, CertBuilder};
use super::Certificate;
use crate::lmimodel::{AffineExpr, BlockEntry};
use crate::matcore::{DenseMatrix, Domain};
use crate::sdpsolver::SolverOptions;
use crate::{Error, Result};

/// Equivalent stability formulations. Availability depends on the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StabilityVariant {
    /// `AᵀP + PA ≺ 0` (CT) / `AᵀPA − P ≺ 0` (DT), `P ≻ 0`.
    Primal,
    /// Dual Lyapunov inequality in `X = P⁻¹`.
    Dual,
    /// Two-multiplier S-variable form.
    SVariable,
    /// Reciprocal-projection form (CT only).
    Reciprocal,
    /// Dilated three-block form with `VᵀA` coupling (CT only).
    DilatedA,
    /// Dilated three-block form with `VᵀAᵀ` coupling (CT only).
    DilatedAt,
    /// `[[P, AP],[∗, P]] ≻ 0` (DT only).
    SchurAP,
    /// `[[P, AᵀP],[∗, P]] ≻ 0` (DT only).
    SchurAtP,
    /// `[[P, PAᵀ],[∗, P]] ≻ 0` (DT only).
    SchurPAt,
    /// `[[P, PA],[∗, P]] ≻ 0` (DT only).
    SchurPA,
    /// `[[P, AᵀG],[∗, G + Gᵀ − P]] ≻ 0` with a slack `G` (DT only).
    DeOliveira,
}

impl StabilityVariant {
    pub fn supports(&self, domain: Domain) -> bool {
        use StabilityVariant::*;
        match self {
            Primal | Dual | SVariable => true,
            Reciprocal | DilatedA | DilatedAt => domain == Domain::Ct,
            SchurAP | SchurAtP | SchurPAt | SchurPA | DeOliveira => domain == Domain::Dt,
        }
    }

    pub fn name(&self) -> &'static str {
        use StabilityVariant::*;
        match self {
            Primal => "primal",
            Dual => "dual",
            SVariable => "s_variable",
            Reciprocal => "reciprocal",
            DilatedA => "dilated_a",
            DilatedAt => "dilated_at",
            SchurAP => "schur_ap",
            SchurAtP => "schur_atp",
            SchurPAt => "schur_pat",
            SchurPA => "schur_pa",
            DeOliveira => "deoliveira",
        }
    }
}

/// The complete variant list for a domain (7 DT variants beside the primal).
pub fn stability_all_variants(domain: Domain) -> Vec<StabilityVariant> {
    use StabilityVariant::*;
    match domain {
        Domain::Ct => vec![Primal, Dual, SVariable, Reciprocal, DilatedA, DilatedAt],
        Domain::Dt => {
            vec![Primal, Dual, SchurAP, SchurAtP, SchurPAt, SchurPA, SVariable, DeOliveira]
        }
    }
}

/// Asymptotic-stability certificate for `A` in the chosen formulation. All
/// formulations are homogeneous, so the engine pins them (`+I` offset) for a
/// decisive margin in both directions.
pub fn stability(
    a: &DenseMatrix,
    domain: Domain,
    variant: StabilityVariant,
    opts: &SolverOptions,
) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("stability of non-square matrix".into()));
    }
    if !variant.supports(domain) {
        return Err(Error::Precondition(format!(
            "variant {:?} is not defined for {:?}",
            variant, domain
        )));
    }
    let n = a.rows();
    let eps = judge_eps(a.frob_norm());
    let mut cb = CertBuilder::new(eps);
    let at = a.transpose();
    use StabilityVariant::*;
    match (domain, variant) {
        (Domain::Ct, Primal) => {
            let p = cb.prob.symmetric(n, "P")?;
            cb.watch("P", p);
            let pe = AffineExpr::var(p);
            cb.property_pinned(pe.neg(), 1.0, "P pd");
            cb.property_pinned(&pe.lmul(&at) + &pe.rmul(a), 1.0, "lyapunov");
        }
        (Domain::Ct, Dual) => {
            let x = cb.prob.symmetric(n, "X")?;
            cb.watch("X", x);
            let xe = AffineExpr::var(x);
            cb.property_pinned(xe.neg(), 1.0, "X pd");
            cb.property_pinned(&xe.rmul(&at) + &xe.lmul(a), 1.0, "dual lyapunov");
        }
        (Domain::Ct, SVariable) => {
            let p = cb.prob.symmetric(n, "P")?;
            let f1 = cb.prob.rectangular(n, n, "F1")?;
            let f2 = cb.prob.rectangular(n, n, "F2")?;
            cb.watch("P", p);
            cb.watch("F1", f1);
            cb.watch("F2", f2);
            let f1a = AffineExpr::var(f1).rmul(a);
            let top_left = &f1a + &f1a.t();
            let top_right = &(&AffineExpr::var(p) - &AffineExpr::var(f1))
                + &AffineExpr::var_t(f2).lmul(&at);
            let bottom = AffineExpr::var(f2).he().neg();
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(top_left), BlockEntry::E(top_right)],
                vec![BlockEntry::Mirror, BlockEntry::E(bottom)],
            ])?;
            cb.property_pinned(AffineExpr::var(p).neg(), 1.0, "P pd");
            cb.property_pinned(block, 1.0, "s-variable");
        }
        (Domain::Ct, Reciprocal) => {
            let y = cb.prob.symmetric(n, "Y")?;
            let w = cb.prob.rectangular(n, n, "W")?;
            cb.watch("Y", y);
            cb.watch("W", w);
            let tl = &AffineExpr::var(y) - &AffineExpr::var(w).he();
            let tr = &AffineExpr::var(y).lmul(a) + &AffineExpr::var_t(w);
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(tl), BlockEntry::E(tr)],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::var(y).neg())],
            ])?;
            cb.property_pinned(AffineExpr::var(y).neg(), 1.0, "Y pd");
            cb.property_pinned(block, 1.0, "reciprocal");
        }
        (Domain::Ct, DilatedA) | (Domain::Ct, DilatedAt) => {
            let x = cb.prob.symmetric(n, "X")?;
            let v = cb.prob.rectangular(n, n, "V")?;
            cb.watch("X", x);
            cb.watch("V", v);
            let coupling = if variant == DilatedA {
                AffineExpr::var_t(v).rmul(a)
            } else {
                AffineExpr::var_t(v).rmul(&at)
            };
            let tl = AffineExpr::var(v).he().neg();
            let tm = &coupling + &AffineExpr::var(x);
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(tl), BlockEntry::E(tm), BlockEntry::E(AffineExpr::var_t(v))],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::var(x).neg()),
                    BlockEntry::zero(n, n),
                ],
                vec![
                    BlockEntry::Mirror,
                    BlockEntry::Mirror,
                    BlockEntry::E(AffineExpr::var(x).neg()),
                ],
            ])?;
            cb.property_pinned(AffineExpr::var(x).neg(), 1.0, "X pd");
            cb.property_pinned(block, 1.0, "dilated");
        }
        (Domain::Dt, Primal) => {
            let p = cb.prob.symmetric(n, "P")?;
            cb.watch("P", p);
            let pe = AffineExpr::var(p);
            let stein = &pe.lmul(&at).rmul(a) - &pe;
            cb.property_pinned(pe.neg(), 1.0, "P pd");
            cb.property_pinned(stein, 1.0, "stein");
        }
        (Domain::Dt, Dual) => {
            let p = cb.prob.symmetric(n, "P")?;
            cb.watch("P", p);
            let pe = AffineExpr::var(p);
            let stein = &pe.lmul(a).rmul(&at) - &pe;
            cb.property_pinned(pe.neg(), 1.0, "P pd");
            cb.property_pinned(stein, 1.0, "dual stein");
        }
        (Domain::Dt, SchurAP) | (Domain::Dt, SchurAtP) | (Domain::Dt, SchurPAt)
        | (Domain::Dt, SchurPA) => {
            let p = cb.prob.symmetric(n, "P")?;
            cb.watch("P", p);
            let pe = AffineExpr::var(p);
            let off = match variant {
                SchurAP => pe.lmul(a),
                SchurAtP => pe.lmul(&at),
                SchurPAt => pe.rmul(&at),
                SchurPA => pe.rmul(a),
                _ => unreachable!(),
            };
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(pe.clone()), BlockEntry::E(off)],
                vec![BlockEntry::Mirror, BlockEntry::E(pe.clone())],
            ])?;
            cb.property_pinned(block.neg(), 1.0, "schur form");
        }
        (Domain::Dt, SVariable) => {
            let p = cb.prob.symmetric(n, "P")?;
            let f1 = cb.prob.rectangular(n, n, "F1")?;
            let f2 = cb.prob.rectangular(n, n, "F2")?;
            cb.watch("P", p);
            cb.watch("F1", f1);
            cb.watch("F2", f2);
            let f1a = AffineExpr::var(f1).rmul(a);
            let tl = &(&f1a + &f1a.t()) - &AffineExpr::var(p);
            let tr = &AffineExpr::var(f1).neg() + &AffineExpr::var_t(f2).lmul(&at);
            let br = &AffineExpr::var(p) - &AffineExpr::var(f2).he();
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(tl), BlockEntry::E(tr)],
                vec![BlockEntry::Mirror, BlockEntry::E(br)],
            ])?;
            cb.property_pinned(AffineExpr::var(p).neg(), 1.0, "P pd");
            cb.property_pinned(block, 1.0, "s-variable dt");
        }
        (Domain::Dt, DeOliveira) => {
            let p = cb.prob.symmetric(n, "P")?;
            let g = cb.prob.rectangular(n, n, "G")?;
            cb.watch("P", p);
            cb.watch("G", g);
            let tr = AffineExpr::var(g).lmul(&at);
            let br = &AffineExpr::var(g).he() - &AffineExpr::var(p);
            let block = AffineExpr::block(&[
                vec![BlockEntry::E(AffineExpr::var(p)), BlockEntry::E(tr)],
                vec![BlockEntry::Mirror, BlockEntry::E(br)],
            ])?;
            cb.property_pinned(block.neg(), 1.0, "g-form");
        }
        _ => unreachable!("variant support checked above"),
    }
    cb.feasibility(variant.name(), opts)
}
