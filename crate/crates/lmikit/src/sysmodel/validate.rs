//! Kalman rank checks and stability classification.

use super::StateSpace;
use crate::matcore::{eigenvalues, rank, DenseMatrix, Domain};
use crate::Result;

/// Structural report of a realization.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SystemReport {
    pub controllable: bool,
    pub observable: bool,
    pub minimal: bool,
    pub stable: bool,
    /// Spectral abscissa (CT) or spectral radius (DT).
    pub stability_measure: f64,
    pub controllability_rank: usize,
    pub observability_rank: usize,
}

/// Controllability matrix `[B, AB, …, Aⁿ⁻¹B]`.
pub fn controllability_matrix(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let mut blocks: Vec<DenseMatrix> = Vec::with_capacity(n);
    let mut cur = b.clone();
    for _ in 0..n {
        blocks.push(cur.clone());
        cur = a * &cur;
    }
    DenseMatrix::hstack(&blocks.iter().collect::<Vec<_>>())
}

/// Rank tests on the Kalman matrices plus eigenvalue stability per domain.
pub fn validate(sys: &StateSpace) -> Result<SystemReport> {
    let n = sys.order();
    let ctrb = controllability_matrix(&sys.a, &sys.b);
    let obsv = controllability_matrix(&sys.a.transpose(), &sys.c.transpose());
    let cr = rank(&ctrb)?;
    let or = rank(&obsv)?;
    let vals = eigenvalues(&sys.a)?;
    let measure = match sys.domain {
        Domain::Ct => vals.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max),
        Domain::Dt => vals.iter().map(|v| v.abs()).fold(0.0_f64, f64::max),
    };
    let measure = if n == 0 { f64::NEG_INFINITY } else { measure };
    let stable = match sys.domain {
        Domain::Ct => measure < 0.0,
        Domain::Dt => measure < 1.0,
    };
    Ok(SystemReport {
        controllable: cr == n,
        observable: or == n,
        minimal: cr == n && or == n,
        stable,
        stability_measure: measure,
        controllability_rank: cr,
        observability_rank: or,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_lag_is_minimal_and_stable() {
        let sys = StateSpace::siso(-1.0, 1.0, 1.0, 0.0, Domain::Ct);
        let r = validate(&sys).unwrap();
        assert!(r.minimal && r.stable);
        assert!((r.stability_measure + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_input_map_is_uncontrollable() {
        let sys = StateSpace::new(
            DenseMatrix::diag(&[-1.0, -2.0]),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::from_rows(&[vec![1.0, 1.0]]),
            DenseMatrix::zeros(1, 1),
            Domain::Ct,
        )
        .unwrap();
        let r = validate(&sys).unwrap();
        assert!(!r.controllable);
        assert!(!r.minimal);
    }

    #[test]
    fn random_minimal_system_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let n = 4;
        // random systems are minimal with probability one
        let mut a = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                a.set(r, c, rng.gen_range(-1.0..1.0));
            }
        }
        let mut b = DenseMatrix::zeros(n, 1);
        let mut cmat = DenseMatrix::zeros(1, n);
        for r in 0..n {
            b.set(r, 0, rng.gen_range(-1.0..1.0));
            cmat.set(0, r, rng.gen_range(-1.0..1.0));
        }
        let sys = StateSpace::new(a, b, cmat, DenseMatrix::zeros(1, 1), Domain::Ct).unwrap();
        let r = validate(&sys).unwrap();
        assert_eq!(r.controllability_rank, n);
        assert_eq!(r.observability_rank, n);
    }

    #[test]
    fn dt_stability_uses_unit_disk() {
        let sys = StateSpace::siso(0.9, 1.0, 1.0, 0.0, Domain::Dt);
        assert!(validate(&sys).unwrap().stable);
        let sys = StateSpace::siso(1.0, 1.0, 1.0, 0.0, Domain::Dt);
        assert!(!validate(&sys).unwrap().stable);
    }
}
