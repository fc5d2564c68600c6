//! Lyapunov/Stein equation solvers (Kronecker vectorization), the stabilizing
//! Riccati solution used by strong stabilization, and the coupling
//! factorization used in output-feedback controller recovery.

use super::schur::{real_schur, reorder_schur_stable_first, schur_eigenvalues};
use super::{kron, DenseMatrix, Lu, SymmetricMatrix};
use crate::{Error, Result};

/// Time axis of a linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    /// Continuous time.
    Ct,
    /// Discrete time.
    Dt,
}

/// Solve `AᵀP + PA + Q = 0` (CT) or `AᵀPA − P + Q = 0` (DT) for symmetric P.
pub fn solve_lyapunov(a: &DenseMatrix, q: &SymmetricMatrix, domain: Domain) -> Result<SymmetricMatrix> {
    if !a.is_square() || a.rows() != q.dim() {
        return Err(Error::DimensionMismatch("Lyapunov dims".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SymmetricMatrix::zeros(0));
    }
    let eye = DenseMatrix::identity(n);
    let at = a.transpose();
    // vec(AᵀP) = (I⊗Aᵀ) vec P ; vec(PA) = (Aᵀ⊗I) vec P ; vec(AᵀPA) = (Aᵀ⊗Aᵀ) vec P
    let lhs = match domain {
        Domain::Ct => &kron(&eye, &at) + &kron(&at, &eye),
        Domain::Dt => &kron(&at, &at) - &kron(&eye, &eye),
    };
    let lu = Lu::new(&lhs)?;
    if lu.is_singular(1e-13) {
        return Err(Error::DegenerateSpectrum(
            "Lyapunov operator is singular (eigenvalue sum/product hits the critical set)".into(),
        ));
    }
    let rhs: Vec<f64> = q.as_mat().vectorize().iter().map(|v| -v).collect();
    let p_vec = lu.solve_vec(&rhs)?;
    let p = DenseMatrix::from_vectorized(n, n, &p_vec);
    Ok(SymmetricMatrix::symmetrize(&p))
}

/// Residual of the Lyapunov equation at a candidate solution.
pub fn lyapunov_residual(a: &DenseMatrix, q: &SymmetricMatrix, p: &SymmetricMatrix, domain: Domain) -> f64 {
    let pm = p.as_mat();
    let r = match domain {
        Domain::Ct => &(&(&a.transpose() * pm) + &(pm * a)) + q.as_mat(),
        Domain::Dt => &(&(&(&a.transpose() * pm) * a) - pm) + q.as_mat(),
    };
    r.frob_norm()
}

/// Stabilizing solution of `XA + AᵀX − XBBᵀX = 0` with `X ⪰ 0` and
/// `A − BBᵀX` Hurwitz, via the ordered real Schur form of the Hamiltonian
/// `[A, −BBᵀ; 0, −Aᵀ]` followed by Newton refinement.
pub fn solve_care_stabilizing(a: &DenseMatrix, b: &DenseMatrix) -> Result<SymmetricMatrix> {
    if !a.is_square() || b.rows() != a.rows() {
        return Err(Error::DimensionMismatch("Riccati dims".into()));
    }
    let n = a.rows();
    let bbt = &(b * &b.transpose());
    let ham = DenseMatrix::block(&[
        vec![a, &bbt.scale(-1.0)],
        vec![&DenseMatrix::zeros(n, n), &a.transpose().scale(-1.0)],
    ]);
    let (mut u, mut t) = real_schur(&ham)?;
    // No eigenvalue may sit on the imaginary axis.
    let vals = schur_eigenvalues(&t);
    let scale = ham.frob_norm().max(1.0);
    if vals.iter().any(|v| v.re.abs() <= 1e-9 * scale) {
        return Err(Error::NotSolvable("Hamiltonian has imaginary-axis eigenvalues".into()));
    }
    let dim = reorder_schur_stable_first(&mut u, &mut t)?;
    if dim != n {
        return Err(Error::NotSolvable(format!(
            "stable invariant subspace has dimension {dim}, expected {n}"
        )));
    }
    let u1 = u.submatrix(0, 0, n, n);
    let u2 = u.submatrix(n, 0, n, n);
    let lu = Lu::new(&u1)?;
    if lu.is_singular(1e-12) {
        return Err(Error::NotSolvable("stable subspace is not a graph over the state space".into()));
    }
    // X = U2 U1⁻¹  (solve U1ᵀ Xᵀ = U2ᵀ)
    let xt = Lu::new(&u1.transpose())?.solve_mat(&u2.transpose())?;
    let mut x = SymmetricMatrix::symmetrize(&xt.transpose());

    // Newton refinement: with A_c = A − BBᵀX, solve A_cᵀΔ + ΔA_c = −R(X).
    for _ in 0..3 {
        let xm = x.as_mat();
        let resid = &(&(xm * a) + &(&a.transpose() * xm)) - &(&(xm * bbt) * xm);
        if resid.frob_norm() <= 1e-12 * a.frob_norm().powi(2).max(1.0) {
            break;
        }
        let acl = a - &(bbt * xm);
        let delta = match solve_lyapunov(&acl, &SymmetricMatrix::symmetrize(&resid), Domain::Ct) {
            Ok(d) => d,
            Err(_) => break,
        };
        x = SymmetricMatrix::symmetrize(&(xm + delta.as_mat()));
    }

    // Validate: X ⪰ 0 (up to roundoff) and A − BBᵀX Hurwitz.
    let min_eig = x.min_eig()?;
    if min_eig < -1e-7 * x.as_mat().frob_norm().max(1.0) {
        return Err(Error::NotSolvable(format!("Riccati solution not PSD (λ_min = {min_eig:.3e})")));
    }
    let acl = a - &(bbt * x.as_mat());
    let cl = super::eigenvalues(&acl)?;
    if cl.iter().any(|v| v.re >= 0.0) {
        return Err(Error::NotSolvable("closed loop A − BBᵀX is not Hurwitz".into()));
    }
    Ok(x)
}

/// Factor `X₂ Y₂ᵀ = I − X₁ Y₁` with both factors square and nonsingular
/// (LU with partial pivoting: `X₂ = Pᵀ L`, `Y₂ = Uᵀ`).
pub fn coupling_factorization(
    x1: &SymmetricMatrix,
    y1: &SymmetricMatrix,
) -> Result<(DenseMatrix, DenseMatrix)> {
    if x1.dim() != y1.dim() {
        return Err(Error::DimensionMismatch("coupling factorization dims".into()));
    }
    let n = x1.dim();
    let m = &DenseMatrix::identity(n) - &(x1.as_mat() * y1.as_mat());
    let lu = Lu::new(&m)?;
    if lu.is_singular(1e-12) {
        return Err(Error::CouplingDegenerate("I − X₁Y₁ is singular".into()));
    }
    let (perm, l, u) = lu.unpack();
    // rows of M were permuted as perm: LU = M[perm, :], so M = Pᵀ(LU) where
    // Pᵀ scatters row i back to perm[i].
    let mut pt = DenseMatrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        pt.set(p, i, 1.0);
    }
    let x2 = &pt * &l;
    let y2 = u.transpose();
    Ok((x2, y2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigenvalues;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_ct_lyapunov() {
        let a = DenseMatrix::scalar(-1.0);
        let q = SymmetricMatrix::new(DenseMatrix::scalar(1.0)).unwrap();
        let p = solve_lyapunov(&a, &q, Domain::Ct).unwrap();
        assert!((p.as_mat().get(0, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scalar_dt_lyapunov() {
        let a = DenseMatrix::scalar(0.5);
        let q = SymmetricMatrix::new(DenseMatrix::scalar(1.0)).unwrap();
        let p = solve_lyapunov(&a, &q, Domain::Dt).unwrap();
        assert!((p.as_mat().get(0, 0) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_hurwitz_lyapunov_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let n = 5;
            let mut a = DenseMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a.set(r, c, rng.gen_range(-1.0..1.0));
                }
            }
            let a = &a - &DenseMatrix::scaled_identity(n, 3.0); // comfortably Hurwitz
            let q = SymmetricMatrix::identity(n);
            let p = solve_lyapunov(&a, &q, Domain::Ct).unwrap();
            let res = lyapunov_residual(&a, &q, &p, Domain::Ct);
            assert!(res <= 1e-8 * q.as_mat().frob_norm().max(1.0));
            // Q ≻ 0 with Hurwitz A gives P ≻ 0
            assert!(p.min_eig().unwrap() > 0.0);
        }
    }

    #[test]
    fn ct_lyapunov_pd_iff_hurwitz() {
        // unstable A with Q ≻ 0 must not produce P ≻ 0
        let a = DenseMatrix::from_rows(&[vec![0.5, 1.0], vec![0.0, -2.0]]);
        let q = SymmetricMatrix::identity(2);
        let p = solve_lyapunov(&a, &q, Domain::Ct).unwrap();
        assert!(p.min_eig().unwrap() < 0.0);
    }

    #[test]
    fn care_scalar_cases() {
        // A = -1, B = 1: A already Hurwitz, X = 0
        let x = solve_care_stabilizing(&DenseMatrix::scalar(-1.0), &DenseMatrix::scalar(1.0)).unwrap();
        assert!(x.as_mat().get(0, 0).abs() < 1e-9);
        // A = 1, B = 1: 2X - X² = 0 -> X = 2 and A - X = -1
        let x = solve_care_stabilizing(&DenseMatrix::scalar(1.0), &DenseMatrix::scalar(1.0)).unwrap();
        assert!((x.as_mat().get(0, 0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn care_random_closed_loop_hurwitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..8 {
            let n = 4;
            let mut a = DenseMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a.set(r, c, rng.gen_range(-1.0..1.0));
                }
            }
            let mut b = DenseMatrix::zeros(n, 2);
            for r in 0..n {
                for c in 0..2 {
                    b.set(r, c, rng.gen_range(-1.0..1.0));
                }
            }
            let x = match solve_care_stabilizing(&a, &b) {
                Ok(x) => x,
                Err(Error::NotSolvable(_)) => continue, // e.g. jω-axis eigenvalue draw
                Err(e) => panic!("{e}"),
            };
            let acl = &a - &(&(&b * &b.transpose()) * x.as_mat());
            let vals = eigenvalues(&acl).unwrap();
            assert!(vals.iter().all(|v| v.re < 0.0));
            // residual check
            let xm = x.as_mat();
            let bbt = &b * &b.transpose();
            let resid = &(&(xm * &a) + &(&a.transpose() * xm)) - &(&(xm * &bbt) * xm);
            assert!(resid.frob_norm() <= 1e-7 * a.frob_norm().powi(2).max(1.0));
        }
    }

    #[test]
    fn coupling_factorization_cases() {
        // X1 = 2I, Y1 = I: X2 Y2ᵀ = -I
        let x1 = SymmetricMatrix::new(DenseMatrix::scaled_identity(3, 2.0)).unwrap();
        let y1 = SymmetricMatrix::identity(3);
        let (x2, y2) = coupling_factorization(&x1, &y1).unwrap();
        let prod = &x2 * &y2.transpose();
        assert!((&prod + &DenseMatrix::identity(3)).frob_norm() < 1e-12);
        // singular coupling: X1 = Y1 = I
        let x1 = SymmetricMatrix::identity(2);
        let y1 = SymmetricMatrix::identity(2);
        assert!(matches!(coupling_factorization(&x1, &y1), Err(Error::CouplingDegenerate(_))));
    }

    #[test]
    fn coupling_factorization_random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 4;
        // feasible pair: [X1, I; I, Y1] ≻ 0 via X1 = M + 2I, Y1 chosen with I − X1Y1 nonsingular
        let mut g = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                g.set(r, c, rng.gen_range(-0.3..0.3));
            }
        }
        let x1 = SymmetricMatrix::symmetrize(&(&(&g * &g.transpose()) + &DenseMatrix::scaled_identity(n, 2.0)));
        let y1 = SymmetricMatrix::symmetrize(&(&(&g.transpose() * &g) + &DenseMatrix::scaled_identity(n, 2.0)));
        let (x2, y2) = coupling_factorization(&x1, &y1).unwrap();
        let target = &DenseMatrix::identity(n) - &(x1.as_mat() * y1.as_mat());
        let resid = (&(&x2 * &y2.transpose()) - &target).frob_norm();
        assert!(resid <= 1e-9 * n as f64 * target.frob_norm().max(1.0));
    }
}
