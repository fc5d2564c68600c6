//! Transmission zeros and the minimum-phase certificate. Two structural
//! routes: the annihilator construction (`N A M` with `CM = 0`, `NB = 0`,
//! `NM = I`) for strictly proper systems, and `A − B(DᵀD)⁻¹DᵀC` when the
//! feedthrough has full column rank.

use super::engine::{judge_eps, CertBuilder};
use super::Certificate;
use crate::lmimodel::AffineExpr;
use crate::matcore::{
    eigenvalues, nullspace_basis, rank, Complex, DenseMatrix, Domain, Lu,
};
use crate::sdpsolver::SolverOptions;
use crate::sysmodel::StateSpace;
use crate::{Error, Result};

/// Zeros plus the minimum-phase certificate.
#[derive(Debug)]
pub struct ZeroReport {
    pub zeros: Vec<Complex>,
    pub minimum_phase: Certificate,
    /// Which structural route produced the zero-dynamics matrix.
    pub route: &'static str,
}

fn zero_dynamics_matrix(sys: &StateSpace) -> Result<(DenseMatrix, &'static str)> {
    let n = sys.order();
    let d_rank = rank(&sys.d)?;
    if d_rank == sys.d.cols() && sys.d.cols() > 0 {
        // feedthrough route: A − B(DᵀD)⁻¹DᵀC
        let dtd = &sys.d.transpose() * &sys.d;
        let lu = Lu::new(&dtd)?;
        let dtc = &sys.d.transpose() * &sys.c;
        let sol = lu.solve_mat(&dtc)?;
        return Ok((&sys.a - &(&sys.b * &sol), "feedthrough"));
    }
    if sys.d.frob_norm() == 0.0 {
        // annihilator route: M spans N(C), N built from N(Bᵀ) with NM = I
        let m_basis = nullspace_basis(&sys.c)?;
        let nt_basis = nullspace_basis(&sys.b.transpose())?; // columns span N(Bᵀ)
        let q = m_basis.cols();
        if q == 0 {
            return Ok((DenseMatrix::zeros(0, 0), "annihilator"));
        }
        if nt_basis.cols() != q {
            return Err(Error::UnsupportedStructure(format!(
                "annihilator dimensions disagree ({} vs {q})",
                nt_basis.cols()
            )));
        }
        let n_tilde = nt_basis.transpose(); // q×n with ÑB = 0
        let nm = &n_tilde * &m_basis;
        let lu = Lu::new(&nm)?;
        if lu.is_singular(1e-10) {
            return Err(Error::UnsupportedStructure("N M is singular".into()));
        }
        let n_mat = lu.solve_mat(&n_tilde)?; // (ÑM)⁻¹ Ñ so that N M = I
        debug_assert_eq!(n_mat.rows(), q);
        debug_assert_eq!(n_mat.cols(), n);
        return Ok((&(&n_mat * &sys.a) * &m_basis, "annihilator"));
    }
    Err(Error::UnsupportedStructure(
        "feedthrough is neither zero nor full column rank".into(),
    ))
}

/// Compute transmission zeros and certify minimum phase through a Lyapunov
/// LMI on the zero-dynamics matrix, cross-checked against its eigenvalues.
pub fn transmission_zeros(sys: &StateSpace, opts: &SolverOptions) -> Result<ZeroReport> {
    if sys.domain != Domain::Ct {
        return Err(Error::Precondition("transmission zeros are computed for CT systems".into()));
    }
    let (zdyn, route) = zero_dynamics_matrix(sys)?;
    let zeros = if zdyn.rows() == 0 { vec![] } else { eigenvalues(&zdyn)? };
    let mut zeros_sorted = zeros.clone();
    zeros_sorted.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    // minimum phase ⇔ the zero-dynamics matrix is Hurwitz
    let cert = if zdyn.rows() == 0 {
        // no finite zeros: trivially minimum phase
        Certificate {
            verdict: super::Verdict::Holds,
            value: None,
            witnesses: vec![],
            form_used: "min_phase(empty)".into(),
            residual: 0.0,
            margin: None,
            notes: vec!["no finite transmission zeros".into()],
        }
    } else {
        let q = zdyn.rows();
        let eps = judge_eps(zdyn.frob_norm());
        let mut cb = CertBuilder::new(eps);
        let p = cb.prob.symmetric(q, "P")?;
        cb.watch("P", p);
        let pe = AffineExpr::var(p);
        cb.property_pinned(pe.neg(), 1.0, "P pd");
        cb.property_pinned(&pe.rmul(&zdyn) + &pe.lmul(&zdyn.transpose()), 1.0, "zero dynamics");
        let mut cert = cb.feasibility("min_phase", opts)?;
        // cross-check the LMI verdict against the zero locations
        let all_lhp = zeros_sorted.iter().all(|z| z.re < 0.0);
        let lmi_says = cert.holds();
        if all_lhp != lmi_says && cert.verdict != super::Verdict::Inconclusive {
            cert.notes.push(format!(
                "eigenvalue cross-check disagrees (eigs say min-phase = {all_lhp})"
            ));
            cert.verdict = super::Verdict::Inconclusive;
        }
        cert
    };
    Ok(ZeroReport { zeros: zeros_sorted, minimum_phase: cert, route })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certs::Verdict;
    use crate::oracles::zeros_oracle;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn biproper_lag_zero_at_minus_two() {
        // G(s) = (s+2)/(s+1): A=−1, B=1, C=1, D=1; A − BD⁻¹C = −2
        let sys = StateSpace::siso(-1.0, 1.0, 1.0, 1.0, Domain::Ct);
        let rep = transmission_zeros(&sys, &opts()).unwrap();
        assert_eq!(rep.route, "feedthrough");
        assert_eq!(rep.zeros.len(), 1);
        assert!((rep.zeros[0].re + 2.0).abs() < 1e-9);
        assert_eq!(rep.minimum_phase.verdict, Verdict::Holds);
    }

    #[test]
    fn nonminimum_phase_detected() {
        // G(s) = (s−2)/(s+1) = 1 − 3/(s+1): zero at +2
        let sys = StateSpace::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(-3.0),
            DenseMatrix::scalar(1.0),
            Domain::Ct,
        )
        .unwrap();
        let rep = transmission_zeros(&sys, &opts()).unwrap();
        assert!((rep.zeros[0].re - 2.0).abs() < 1e-9);
        assert_eq!(rep.minimum_phase.verdict, Verdict::Fails);
    }

    #[test]
    fn zero_feedthrough_uses_annihilator_route() {
        // two-state SISO with a known zero: G(s) = (s+3)/((s+1)(s+2))
        // controllable canonical: A = [[0,1],[-2,-3]], B = [0;1], C = [3, 1]
        let sys = StateSpace::new(
            DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]),
            DenseMatrix::from_rows(&[vec![0.0], vec![1.0]]),
            DenseMatrix::from_rows(&[vec![3.0, 1.0]]),
            DenseMatrix::zeros(1, 1),
            Domain::Ct,
        )
        .unwrap();
        let rep = transmission_zeros(&sys, &opts()).unwrap();
        assert_eq!(rep.route, "annihilator");
        assert_eq!(rep.zeros.len(), 1);
        assert!((rep.zeros[0].re + 3.0).abs() < 1e-8, "zeros {:?}", rep.zeros);
        assert_eq!(rep.minimum_phase.verdict, Verdict::Holds);
        // pencil oracle agreement
        let oracle = zeros_oracle(&sys).unwrap();
        assert_eq!(oracle.len(), 1);
        assert!((oracle[0].re - rep.zeros[0].re).abs() < 1e-8);
    }

    #[test]
    fn identity_feedthrough_zero_output_map() {
        // D = I, C = 0: zeros = eigenvalues of A
        let a = DenseMatrix::diag(&[-1.0, -4.0]);
        let sys = StateSpace::new(
            a,
            DenseMatrix::identity(2),
            DenseMatrix::zeros(2, 2),
            DenseMatrix::identity(2),
            Domain::Ct,
        )
        .unwrap();
        let rep = transmission_zeros(&sys, &opts()).unwrap();
        assert_eq!(rep.zeros.len(), 2);
        assert!((rep.zeros[0].re + 4.0).abs() < 1e-9);
        assert!((rep.zeros[1].re + 1.0).abs() < 1e-9);
    }
}
