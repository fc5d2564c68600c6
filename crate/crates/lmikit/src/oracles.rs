//! LMI-independent numerical verification: eigenvalue stability tests,
//! Hamiltonian-bisection and frequency-grid norm computations, Gramian-based
//! H2 norms, dissipativity margins over frequency grids, and transmission
//! zeros via the system pencil. Every certificate and synthesis result gets
//! replayed against these.

use crate::matcore::{
    eigenvalues, inverse, kron, solve_lyapunov, Complex, DenseMatrix, Domain, Lu, SymmetricMatrix,
};
use crate::sysmodel::{transfer_eval, StateSpace};
use crate::{Error, Result};

/// Stability verdict with the margin that produced it.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Spectral abscissa (CT) or spectral radius (DT).
    pub measure: f64,
}

/// Eigenvalue stability test: Hurwitz (CT) / Schur (DT).
pub fn stability_eig(a: &DenseMatrix, domain: Domain) -> Result<StabilityReport> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("stability test of non-square matrix".into()));
    }
    if a.rows() == 0 {
        return Ok(StabilityReport { stable: true, measure: f64::NEG_INFINITY });
    }
    let vals = eigenvalues(a)?;
    match domain {
        Domain::Ct => {
            let abscissa = vals.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
            Ok(StabilityReport { stable: abscissa < 0.0, measure: abscissa })
        }
        Domain::Dt => {
            let radius = vals.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
            Ok(StabilityReport { stable: radius < 1.0, measure: radius })
        }
    }
}

/// Default frequency grid: log-spaced around the system's natural scale,
/// plus ω = 0.
pub fn default_frequency_grid(sys: &StateSpace, points: usize) -> Vec<f64> {
    let scale = match stability_eig(&sys.a, sys.domain) {
        Ok(r) => r.measure.abs().max(1e-3),
        Err(_) => 1.0,
    };
    let lo = (1e-3 * scale).ln();
    let hi = (1e3 * scale).ln();
    let mut grid = vec![0.0];
    for k in 0..points {
        let t = k as f64 / (points - 1) as f64;
        grid.push((lo + t * (hi - lo)).exp());
    }
    grid
}

fn gain_at(sys: &StateSpace, omega: f64) -> Result<f64> {
    let point = match sys.domain {
        Domain::Ct => (0.0, omega),
        Domain::Dt => (omega.cos(), omega.sin()),
    };
    transfer_eval(sys, point)?.sigma_max()
}

/// Golden-section refinement of a gain peak around a bracketing triple.
fn refine_peak(sys: &StateSpace, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let phi = 0.5 * (3.0 - 5.0_f64.sqrt());
    let mut x1 = lo + phi * (hi - lo);
    let mut x2 = hi - phi * (hi - lo);
    let mut f1 = gain_at(sys, x1)?;
    let mut f2 = gain_at(sys, x2)?;
    for _ in 0..80 {
        if hi - lo < 1e-12 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - phi * (hi - lo);
            f2 = gain_at(sys, x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + phi * (hi - lo);
            f1 = gain_at(sys, x1)?;
        }
    }
    if f1 >= f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

/// Frequency-grid lower bound on the H∞ norm, refined at local maxima.
fn grid_peak(sys: &StateSpace, grid: &[f64]) -> Result<(f64, f64)> {
    let mut vals = Vec::with_capacity(grid.len());
    for &w in grid {
        vals.push(gain_at(sys, w)?);
    }
    let mut best = (grid[0], vals[0]);
    for (i, (&w, &g)) in grid.iter().zip(&vals).enumerate() {
        if g > best.1 {
            best = (w, g);
        }
        let is_local_max = (i == 0 || vals[i - 1] <= g) && (i + 1 == grid.len() || vals[i + 1] <= g);
        if is_local_max {
            let lo = if i == 0 { w } else { grid[i - 1] };
            let hi = if i + 1 == grid.len() { w } else { grid[i + 1] };
            if hi > lo {
                let (wr, gr) = refine_peak(sys, lo, hi)?;
                if gr > best.1 {
                    best = (wr, gr);
                }
            }
        }
    }
    Ok(best)
}

/// Hamiltonian test: `γ` is a strict upper bound on the CT H∞ norm iff
/// `M(γ)` has no eigenvalue on the imaginary axis, with
/// `M(γ) = [A + BR⁻¹DᵀC,  BR⁻¹Bᵀ;  −Cᵀ(I + DR⁻¹Dᵀ)C,  −(A + BR⁻¹DᵀC)ᵀ]`,
/// `R = γ²I − DᵀD`.
fn hamiltonian_has_imaginary_axis_eig(sys: &StateSpace, gamma: f64) -> Result<bool> {
    let n = sys.order();
    let r = &DenseMatrix::scaled_identity(sys.inputs(), gamma * gamma) - &(&sys.d.transpose() * &sys.d);
    let lu = Lu::new(&r)?;
    if lu.is_singular(1e-12) {
        return Ok(true); // γ at the feedthrough singular value
    }
    let r_inv = lu.inverse()?;
    let a_bar = &sys.a + &(&(&(&sys.b * &r_inv) * &sys.d.transpose()) * &sys.c);
    let top_right = &(&sys.b * &r_inv) * &sys.b.transpose();
    let inner = &DenseMatrix::identity(sys.outputs()) + &(&(&sys.d * &r_inv) * &sys.d.transpose());
    let bottom_left = (&(&sys.c.transpose() * &inner) * &sys.c).scale(-1.0);
    let ham = DenseMatrix::block(&[
        vec![&a_bar, &top_right],
        vec![&bottom_left, &a_bar.transpose().scale(-1.0)],
    ]);
    let vals = eigenvalues(&ham)?;
    let scale = ham.frob_norm().max(1.0);
    Ok(vals.iter().any(|v| v.re.abs() <= 1e-8 * scale && v.im.abs() > 1e-10 * scale || v.re.abs() <= 1e-10 * scale))
}

/// H∞ norm oracle. CT: bisection on the Hamiltonian imaginary-axis test,
/// bracketed by an adaptive frequency grid. DT: dense unit-circle grid with
/// golden-section refinement. Relative accuracy ~1e-6.
pub fn hinf_oracle(sys: &StateSpace) -> Result<f64> {
    let report = stability_eig(&sys.a, sys.domain)?;
    if !report.stable {
        return Err(Error::Precondition("H-infinity oracle needs a stable system".into()));
    }
    match sys.domain {
        Domain::Ct => {
            let grid = default_frequency_grid(sys, 512);
            let (_, lower) = grid_peak(sys, &grid)?;
            let dinf = crate::matcore::sigma_max(&sys.d)?;
            let mut lo = lower.max(dinf);
            if lo == 0.0 {
                return Ok(0.0);
            }
            let mut hi = (lo * 2.0).max(1e-12);
            let mut guard = 0;
            while hamiltonian_has_imaginary_axis_eig(sys, hi)? {
                hi *= 2.0;
                guard += 1;
                if guard > 60 {
                    return Err(Error::SolverFailure("H-infinity upper bracket not found".into()));
                }
            }
            // bisection to relative accuracy
            for _ in 0..80 {
                if hi - lo <= 1e-7 * lo.max(1e-12) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if hamiltonian_has_imaginary_axis_eig(sys, mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
        Domain::Dt => {
            // θ over [0, π]; 2048 points plus refinement
            let npts = 2048;
            let grid: Vec<f64> =
                (0..=npts).map(|k| std::f64::consts::PI * k as f64 / npts as f64).collect();
            let (_, peak) = grid_peak(sys, &grid)?;
            Ok(peak)
        }
    }
}

/// H2 norm oracle via both Gramian routes; the two must agree to 1e-9
/// relative, which is asserted here, not just tested.
pub fn h2_oracle(sys: &StateSpace) -> Result<f64> {
    if sys.d.frob_norm() > 0.0 {
        return Err(Error::UnboundedH2("nonzero feedthrough".into()));
    }
    let report = stability_eig(&sys.a, sys.domain)?;
    if !report.stable {
        return Err(Error::Precondition("H2 oracle needs a stable system".into()));
    }
    if sys.order() == 0 {
        return Ok(0.0);
    }
    // controllability route: A W + W Aᵀ + BBᵀ = 0 (CT) / AWAᵀ − W + BBᵀ = 0 (DT)
    let bbt = SymmetricMatrix::symmetrize(&(&sys.b * &sys.b.transpose()));
    let w = solve_lyapunov(&sys.a.transpose(), &bbt, sys.domain)?;
    let val_c = (&(&sys.c * w.as_mat()) * &sys.c.transpose()).trace();
    // observability route: AᵀM + MA + CᵀC = 0
    let ctc = SymmetricMatrix::symmetrize(&(&sys.c.transpose() * &sys.c));
    let m = solve_lyapunov(&sys.a, &ctc, sys.domain)?;
    let val_o = (&(&sys.b.transpose() * m.as_mat()) * &sys.b).trace();
    let scale = val_c.abs().max(val_o.abs()).max(1e-300);
    if (val_c - val_o).abs() > 1e-9 * scale {
        return Err(Error::SolverFailure(format!(
            "Gramian routes disagree: {val_c} vs {val_o}"
        )));
    }
    Ok(val_c.max(0.0).sqrt())
}

/// Frequency-wise dissipativity margin: the minimum over the grid of
/// `λ̲(G*(jω)QG(jω) + G*(jω)S + SᵀG(jω) + R)`. A negative minimum refutes
/// QSR dissipativity.
pub fn popov_margin(
    sys: &StateSpace,
    q: &SymmetricMatrix,
    s: &DenseMatrix,
    r: &SymmetricMatrix,
    grid: &[f64],
) -> Result<f64> {
    let mut min = f64::INFINITY;
    for &w in grid {
        let point = match sys.domain {
            Domain::Ct => (0.0, w),
            Domain::Dt => (w.cos(), w.sin()),
        };
        let g = transfer_eval(sys, point)?;
        let gh = g.conj_transpose();
        let qg = crate::sysmodel::ComplexMatrix::from_real(q.as_mat().clone());
        let sm = crate::sysmodel::ComplexMatrix::from_real(s.clone());
        let term = &(&gh.mul(&qg).mul(&g) + &gh.mul(&sm)) + &sm.conj_transpose().mul(&g);
        let total = &term + &crate::sysmodel::ComplexMatrix::from_real(r.as_mat().clone());
        let lam = total.hermitian_part().min_eig_hermitian()?;
        min = min.min(lam);
    }
    Ok(min)
}

/// Transmission zeros through the system pencil `[[A − λI, B], [C, D]]`:
/// the finite generalized eigenvalues recovered via a shifted-inverse
/// ordinary eigenvalue problem.
pub fn zeros_oracle(sys: &StateSpace) -> Result<Vec<Complex>> {
    if !sys.is_square() {
        return Err(Error::UnsupportedStructure("zeros oracle needs a square system".into()));
    }
    let n = sys.order();
    let m = sys.inputs();
    let big = DenseMatrix::block(&[vec![&sys.a, &sys.b], vec![&sys.c, &sys.d]]);
    let nn = DenseMatrix::block_diag(&[&DenseMatrix::identity(n), &DenseMatrix::zeros(m, m)]);
    // try a few shifts until (M − σN) is well-conditioned
    let shifts = [0.731, -1.137, 2.389, -3.511, 5.923];
    for &sigma in &shifts {
        let shifted = &big - &nn.scale(sigma);
        let lu = match Lu::new(&shifted) {
            Ok(lu) => lu,
            Err(_) => continue,
        };
        if lu.is_singular(1e-10) {
            continue;
        }
        let t = lu.solve_mat(&nn)?;
        let theta = eigenvalues(&t)?;
        let tol = 1e-9 * t.frob_norm().max(1.0);
        let mut zeros: Vec<Complex> = Vec::new();
        for th in theta {
            if th.abs() > tol {
                // λ = σ + 1/θ
                let denom = th.re * th.re + th.im * th.im;
                zeros.push(Complex::new(sigma + th.re / denom, -th.im / denom));
            }
        }
        zeros.sort_by(|a, b| {
            a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
        });
        return Ok(zeros);
    }
    Err(Error::UnsupportedStructure("singular system pencil".into()))
}

/// DC gain `σ̄(−CA⁻¹B + D)`; errors when A is singular.
pub fn dc_gain(sys: &StateSpace) -> Result<f64> {
    let lu = Lu::new(&sys.a)?;
    if lu.is_singular(1e-12) {
        return Err(Error::PoleEvaluation("pole at the origin".into()));
    }
    let ainv_b = lu.solve_mat(&sys.b)?;
    let g0 = &sys.d - &(&sys.c * &ainv_b);
    crate::matcore::sigma_max(&g0)
}

/// L∞-gain of a single Hamiltonian-free channel at ω (utility for tests).
pub fn gain_at_frequency(sys: &StateSpace, omega: f64) -> Result<f64> {
    gain_at(sys, omega)
}

/// Closed-form used in σ̄ grids: minimum singular value of `G` at ω.
pub fn min_gain_at_frequency(sys: &StateSpace, omega: f64) -> Result<f64> {
    let point = match sys.domain {
        Domain::Ct => (0.0, omega),
        Domain::Dt => (omega.cos(), omega.sin()),
    };
    transfer_eval(sys, point)?.sigma_min()
}

/// Kronecker-based Lyapunov residual used when replaying synthesis results.
pub fn lyapunov_operator_condition(a: &DenseMatrix, domain: Domain) -> Result<f64> {
    let n = a.rows();
    let eye = DenseMatrix::identity(n);
    let at = a.transpose();
    let op = match domain {
        Domain::Ct => &kron(&eye, &at) + &kron(&at, &eye),
        Domain::Dt => &kron(&at, &at) - &kron(&eye, &eye),
    };
    let inv = inverse(&op)?;
    Ok(op.frob_norm() * inv.frob_norm())
}
