//! Interconnections: static/dynamic output feedback and observer error
//! dynamics.

use super::{Controller, GeneralizedPlant, StateSpace};
use crate::matcore::{inverse, DenseMatrix, Lu};
use crate::{Error, Result};

fn well_posedness_check(det_arg: &DenseMatrix, scale: f64, what: &str) -> Result<Lu> {
    let lu = Lu::new(det_arg)?;
    let det = lu.det();
    if det.abs() < 1e-10 * (1.0 + scale) {
        return Err(Error::IllPosedLoop(format!("det({what}) = {det:.3e}")));
    }
    Ok(lu)
}

/// Close `u = K·y` around a generalized plant: returns the `w → z` loop
/// `(A + B₂K̄C₂, B₁ + B₂K̄D₂₁, C₁ + D₁₂K̄C₂, D₁₁ + D₁₂K̄D₂₁)` with the
/// algebraic-loop shift `K̄ = (I − K·D₂₂)⁻¹K`.
pub fn close_static_output_feedback(plant: &GeneralizedPlant, k: &DenseMatrix) -> Result<StateSpace> {
    let dims = plant.dims();
    if k.rows() != dims.n_u || k.cols() != dims.n_y {
        return Err(Error::DimensionMismatch("static gain shape".into()));
    }
    let i_m = DenseMatrix::identity(dims.n_u);
    let arg = &i_m - &(k * &plant.d22);
    let scale = k.frob_norm() * plant.d22.frob_norm();
    let lu = well_posedness_check(&arg, scale, "I − K·D22")?;
    let kbar = lu.solve_mat(k)?;
    let a = &plant.a + &(&(&plant.b2 * &kbar) * &plant.c2);
    let b = &plant.b1 + &(&(&plant.b2 * &kbar) * &plant.d21);
    let c = &plant.c1 + &(&(&plant.d12 * &kbar) * &plant.c2);
    let d = &plant.d11 + &(&(&plant.d12 * &kbar) * &plant.d21);
    StateSpace::new(a, b, c, d, plant.domain)
}

/// Close a dynamic controller `(A_c, B_c, C_c, D_c)` around the plant;
/// stacked state `[x; x_c]` with `D̃ = I − D₂₂·D_c`.
pub fn close_dynamic_output_feedback(plant: &GeneralizedPlant, ctrl: &Controller) -> Result<StateSpace> {
    let dims = plant.dims();
    if ctrl.cc.rows() != dims.n_u || ctrl.bc.cols() != dims.n_y {
        return Err(Error::DimensionMismatch("controller i/o shape".into()));
    }
    if ctrl.domain != plant.domain {
        return Err(Error::Precondition("controller/plant domain mismatch".into()));
    }
    let i_y = DenseMatrix::identity(dims.n_y);
    let dtilde = &i_y - &(&plant.d22 * &ctrl.dc);
    let scale = plant.d22.frob_norm() * ctrl.dc.frob_norm();
    well_posedness_check(&dtilde, scale, "I − D22·Dc")?;
    let dtilde_inv = inverse(&dtilde)?;
    let dc_dti = &ctrl.dc * &dtilde_inv; // D_c D̃⁻¹
    let bc_dti = &ctrl.bc * &dtilde_inv; // B_c D̃⁻¹
    let i_u = DenseMatrix::identity(dims.n_u);
    let mix = &i_u + &(&dc_dti * &plant.d22); // 1 + D_c D̃⁻¹ D22

    let a11 = &plant.a + &(&(&plant.b2 * &dc_dti) * &plant.c2);
    let a12 = &(&plant.b2 * &mix) * &ctrl.cc;
    let a21 = &bc_dti * &plant.c2;
    let a22 = &ctrl.ac + &(&(&bc_dti * &plant.d22) * &ctrl.cc);
    let a = DenseMatrix::block(&[vec![&a11, &a12], vec![&a21, &a22]]);

    let b_top = &plant.b1 + &(&(&plant.b2 * &dc_dti) * &plant.d21);
    let b_bot = &bc_dti * &plant.d21;
    let b = DenseMatrix::vstack(&[&b_top, &b_bot]);

    let c_left = &plant.c1 + &(&(&plant.d12 * &dc_dti) * &plant.c2);
    let c_right = &(&plant.d12 * &mix) * &ctrl.cc;
    let c = DenseMatrix::hstack(&[&c_left, &c_right]);

    let d = &plant.d11 + &(&(&plant.d12 * &dc_dti) * &plant.d21);
    StateSpace::new(a, b, c, d, plant.domain)
}

/// Error dynamics of the standard observer `x̂' = Ax̂ + L(y − C₂x̂)`:
/// `(A − LC₂, B₁ − LD₂₁, C₁, D₁₁)`.
pub fn observer_error_dynamics(plant: &GeneralizedPlant, l: &DenseMatrix) -> Result<StateSpace> {
    let dims = plant.dims();
    if l.rows() != dims.n_x || l.cols() != dims.n_y {
        return Err(Error::DimensionMismatch("observer gain shape".into()));
    }
    let a = &plant.a - &(l * &plant.c2);
    let b = &plant.b1 - &(l * &plant.d21);
    StateSpace::new(a, b, plant.c1.clone(), plant.d11.clone(), plant.domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{eigenvalues, Domain};
    use crate::sysmodel::transfer_eval;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    fn random_plant(rng: &mut ChaCha8Rng, n: usize, with_d22: bool) -> GeneralizedPlant {
        GeneralizedPlant::new(
            random_matrix(rng, n, n),
            random_matrix(rng, n, 2),
            random_matrix(rng, n, 1),
            random_matrix(rng, 2, n),
            random_matrix(rng, 1, n),
            random_matrix(rng, 2, 2),
            random_matrix(rng, 2, 1),
            random_matrix(rng, 1, 2),
            if with_d22 { random_matrix(rng, 1, 1).scale(0.3) } else { DenseMatrix::zeros(1, 1) },
            Domain::Ct,
        )
        .unwrap()
    }

    #[test]
    fn kbar_reduces_to_k_without_d22() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let plant = random_plant(&mut rng, 3, false);
        let k = random_matrix(&mut rng, 1, 1);
        let cl = close_static_output_feedback(&plant, &k).unwrap();
        let expected_a = &plant.a + &(&(&plant.b2 * &k) * &plant.c2);
        assert!((&cl.a - &expected_a).frob_norm() < 1e-14);
    }

    #[test]
    fn zero_gain_returns_open_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let plant = random_plant(&mut rng, 3, true);
        let cl = close_static_output_feedback(&plant, &DenseMatrix::zeros(1, 1)).unwrap();
        assert_eq!(cl.a, plant.a);
        assert_eq!(cl.b, plant.b1);
        assert_eq!(cl.c, plant.c1);
        assert_eq!(cl.d, plant.d11);
    }

    #[test]
    fn scalar_loop_shift_formula() {
        // D22 = 0.5, K = 1 -> K̄ = (1 - 0.5)⁻¹ = 2
        let plant = GeneralizedPlant::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(0.5),
            Domain::Ct,
        )
        .unwrap();
        let cl = close_static_output_feedback(&plant, &DenseMatrix::scalar(1.0)).unwrap();
        // A + B2 K̄ C2 = -1 + 2 = 1
        assert!((cl.a.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ill_posed_loop_detected() {
        let plant = GeneralizedPlant::new(
            DenseMatrix::scalar(-1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(0.0),
            DenseMatrix::scalar(1.0),
            Domain::Ct,
        )
        .unwrap();
        assert!(matches!(
            close_static_output_feedback(&plant, &DenseMatrix::scalar(1.0)),
            Err(Error::IllPosedLoop(_))
        ));
    }

    #[test]
    fn static_controller_matches_static_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let plant = random_plant(&mut rng, 4, true);
        let k = random_matrix(&mut rng, 1, 1);
        let via_static = close_static_output_feedback(&plant, &k).unwrap();
        let via_dynamic =
            close_dynamic_output_feedback(&plant, &Controller::static_gain(k, Domain::Ct)).unwrap();
        assert!((&via_static.a - &via_dynamic.a).frob_norm() < 1e-12);
        assert!((&via_static.b - &via_dynamic.b).frob_norm() < 1e-12);
        assert!((&via_static.c - &via_dynamic.c).frob_norm() < 1e-12);
        assert!((&via_static.d - &via_dynamic.d).frob_norm() < 1e-12);
    }

    /// Frequency-domain LFT oracle: T(s) = P_zw + P_zu K (I − P_yu K)⁻¹ P_yw.
    fn lft_at(plant: &GeneralizedPlant, ctrl: &Controller, s: (f64, f64)) -> crate::sysmodel::ComplexMatrix {
        use crate::sysmodel::ComplexMatrix as Cm;
        let dims = plant.dims();
        let p_full = transfer_eval(&plant.as_state_space(), s).unwrap();
        let k_tf = transfer_eval(&ctrl.as_state_space(), s).unwrap();
        let pzw = p_full.submatrix(0, 0, dims.n_z, dims.n_w);
        let pzu = p_full.submatrix(0, dims.n_w, dims.n_z, dims.n_u);
        let pyw = p_full.submatrix(dims.n_z, 0, dims.n_y, dims.n_w);
        let pyu = p_full.submatrix(dims.n_z, dims.n_w, dims.n_y, dims.n_u);
        let eye = Cm::identity(dims.n_y);
        let inv = (&eye - &pyu.mul(&k_tf)).inverse().unwrap();
        &pzw + &pzu.mul(&k_tf).mul(&inv).mul(&pyw)
    }

    #[test]
    fn dynamic_closure_matches_lft_at_random_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..3 {
            let plant = random_plant(&mut rng, 3, true);
            let ctrl = Controller::new(
                random_matrix(&mut rng, 2, 2),
                random_matrix(&mut rng, 2, 1),
                random_matrix(&mut rng, 1, 2),
                random_matrix(&mut rng, 1, 1).scale(0.2),
                Domain::Ct,
            )
            .unwrap();
            let cl = match close_dynamic_output_feedback(&plant, &ctrl) {
                Ok(cl) => cl,
                Err(Error::IllPosedLoop(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            for k in 0..5 {
                let s = (0.3 + 0.2 * k as f64, 1.0 + k as f64);
                let direct = transfer_eval(&cl, s).unwrap();
                let lft = lft_at(&plant, &ctrl, s);
                assert!(
                    (&direct - &lft).frob_norm() < 1e-9 * (1.0 + lft.frob_norm()),
                    "mismatch at {s:?}"
                );
            }
        }
    }

    #[test]
    fn observer_error_dynamics_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let plant = random_plant(&mut rng, 4, false);
        let l = random_matrix(&mut rng, 4, 1);
        let err = observer_error_dynamics(&plant, &l).unwrap();
        let direct = &plant.a - &(&l * &plant.c2);
        let e1 = eigenvalues(&err.a).unwrap();
        let e2 = eigenvalues(&direct).unwrap();
        for (a, b) in e1.iter().zip(e2.iter()) {
            assert!((a.re - b.re).abs() < 1e-12 && (a.im - b.im).abs() < 1e-12);
        }
        // L = 0 keeps the open loop
        let open = observer_error_dynamics(&plant, &DenseMatrix::zeros(4, 1)).unwrap();
        assert_eq!(open.a, plant.a);
        assert_eq!(open.b, plant.b1);
        assert_eq!(open.c, plant.c1);
    }

    #[test]
    fn identity_measurement_pole_placement() {
        // C2 = I: L = A − A_des places the error poles at eig(A_des)
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, -1.0]]);
        let a_des = DenseMatrix::diag(&[-3.0, -4.0]);
        let plant = GeneralizedPlant::new(
            a.clone(),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::identity(2),
            DenseMatrix::identity(2),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(2, 1),
            DenseMatrix::zeros(2, 1),
            Domain::Ct,
        )
        .unwrap();
        let l = &a - &a_des;
        let err = observer_error_dynamics(&plant, &l).unwrap();
        let mut eigs = eigenvalues(&err.a).unwrap();
        eigs.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((eigs[0].re + 4.0).abs() < 1e-10);
        assert!((eigs[1].re + 3.0).abs() < 1e-10);
    }
}
