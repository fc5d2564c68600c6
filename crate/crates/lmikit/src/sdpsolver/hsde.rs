//! Homogeneous self-dual embedding engine.
//!
//! State: free scalars `x`, equality multipliers `y`, per-block slack/dual
//! pairs `(S_k, Z_k)` in the PD cone, and the homogenizing pair `(τ, κ)`.
//! The governing equations are
//!
//! ```text
//! (E1)  Σᵢ xᵢFᵢᵏ + Sᵏ + τF₀ᵏ = 0
//! (E2)  A_eq x − b_eq τ      = 0
//! (E3)  Σₖ⟨Fᵢᵏ, Zᵏ⟩ − (A_eqᵀy)ᵢ + cᵢτ = 0
//! (E4)  Σₖ⟨F₀ᵏ, Zᵏ⟩ + b_eqᵀy − cᵀx − κ = 0
//! ```
//!
//! together with `SᵏZᵏ → μI`, `τκ → μ`, `μ → 0`. Any exact solution has
//! `⟨S,Z⟩ = τκ = 0`; `τ > 0` yields an optimal pair after normalization,
//! `κ > 0` a primal-infeasibility or unboundedness certificate.
//!
//! Each Newton step eliminates `ΔS` (from E1) and `ΔZ` (HKM linearization of
//! `ZΔS + ΔZS = R`, symmetrized afterwards), leaving a dense nonsymmetric
//! Schur system in `(Δx, Δy, Δτ)` solved by LU with static diagonal
//! regularization and one refinement pass.

use super::{
    FarkasCertificate, ImprovingRay, ResidualReport, Solution, SolveStatus, SolverOptions,
};
use crate::lmimodel::SdpStandardForm;
use crate::matcore::{cholesky, symeig, DenseMatrix, Lu, SymmetricMatrix};
use crate::{Error, Result};

#[derive(Clone)]
struct State {
    x: Vec<f64>,
    y: Vec<f64>,
    tau: f64,
    kappa: f64,
    s: Vec<DenseMatrix>,
    z: Vec<DenseMatrix>,
}

struct Direction {
    dx: Vec<f64>,
    dy: Vec<f64>,
    dtau: f64,
    dkappa: f64,
    ds: Vec<DenseMatrix>,
    dz: Vec<DenseMatrix>,
}

/// Largest step `α` keeping `S + αΔS ≻ 0` (∞ when the direction is PSD).
fn step_to_boundary(s: &DenseMatrix, ds: &DenseMatrix) -> Result<f64> {
    let n = s.rows();
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    let l = cholesky(s).ok_or_else(|| Error::SolverFailure("iterate left the PD cone".into()))?;
    // M = L⁻¹ ΔS L⁻ᵀ ; boundary at α = -1/λ_min(M) when λ_min < 0
    let linv = {
        let mut inv = DenseMatrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let col = crate::matcore::forward_substitute(&l, &e);
            for r in 0..n {
                inv.set(r, c, col[r]);
            }
        }
        inv
    };
    let m = &(&linv * ds) * &linv.transpose();
    let (vals, _) = symeig(&SymmetricMatrix::symmetrize(&m))?;
    let lam_min = vals.first().copied().unwrap_or(0.0);
    if lam_min >= 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(-1.0 / lam_min)
    }
}

fn scalar_step(v: f64, dv: f64) -> f64 {
    if dv >= 0.0 {
        f64::INFINITY
    } else {
        -v / dv
    }
}

/// Entry point: scale the data blockwise, run the engine, unscale the duals.
pub(super) fn solve_hsde(form: &SdpStandardForm, opts: &SolverOptions) -> Result<Solution> {
    // Blockwise scaling β_k and equality-row scaling ρ_l improve the Schur
    // system's conditioning; x and the objective are unaffected, duals are
    // mapped back below.
    let mut scaled = form.clone();
    let mut betas = Vec::with_capacity(form.blocks.len());
    for b in scaled.blocks.iter_mut() {
        let mut nrm = b.f0.frob_norm();
        for f in &b.fi {
            nrm = nrm.max(f.frob_norm());
        }
        let beta = if nrm > 0.0 { 1.0 / nrm } else { 1.0 };
        if beta != 1.0 {
            b.f0 = b.f0.scale(beta);
            for f in b.fi.iter_mut() {
                *f = f.scale(beta);
            }
        }
        betas.push(beta);
    }
    let p = form.eq_a.rows();
    let mut rhos = Vec::with_capacity(p);
    for l in 0..p {
        let mut nrm = form.eq_b[l].abs();
        for j in 0..form.m {
            nrm = nrm.max(form.eq_a.get(l, j).abs());
        }
        let rho = if nrm > 0.0 { 1.0 / nrm } else { 1.0 };
        for j in 0..form.m {
            scaled.eq_a.set(l, j, form.eq_a.get(l, j) * rho);
        }
        scaled.eq_b[l] = form.eq_b[l] * rho;
        rhos.push(rho);
    }
    let mut sol = solve_hsde_inner(&scaled, opts)?;
    for (k, beta) in betas.iter().enumerate() {
        // scaled slack S̃ = β·S, scaled dual Z̃ = Z/β
        sol.slacks[k] = SymmetricMatrix::symmetrize(&sol.slacks[k].as_mat().scale(1.0 / beta));
        sol.duals[k] = SymmetricMatrix::symmetrize(&sol.duals[k].as_mat().scale(*beta));
    }
    for (l, rho) in rhos.iter().enumerate() {
        sol.eq_duals[l] *= rho;
    }
    if let Some(f) = sol.farkas.as_mut() {
        for (k, beta) in betas.iter().enumerate() {
            f.duals[k] = SymmetricMatrix::symmetrize(&f.duals[k].as_mat().scale(*beta));
        }
        for (l, rho) in rhos.iter().enumerate() {
            f.eq_duals[l] *= rho;
        }
    }
    Ok(sol)
}

fn solve_hsde_inner(form: &SdpStandardForm, opts: &SolverOptions) -> Result<Solution> {
    let m = form.m;
    let p = form.eq_a.rows();
    let nblocks = form.blocks.len();
    let total_dim: usize = form.blocks.iter().map(|b| b.dim).sum();
    let barrier = (total_dim + 1) as f64;

    for b in &form.blocks {
        if b.fi.len() != m {
            return Err(Error::DimensionMismatch("block coefficient count".into()));
        }
    }
    if form.cost.len() != m || form.eq_b.len() != p {
        return Err(Error::DimensionMismatch("standard form vectors".into()));
    }

    // Starting point: η-scaled identities, unit homogenization.
    let mut st = State {
        x: vec![0.0; m],
        y: vec![0.0; p],
        tau: 1.0,
        kappa: 1.0,
        s: Vec::with_capacity(nblocks),
        z: Vec::with_capacity(nblocks),
    };
    for b in &form.blocks {
        let mut eta = b.f0.frob_norm();
        for f in &b.fi {
            eta = eta.max(f.frob_norm());
        }
        let eta = (1.0 + eta).sqrt() * 10.0;
        st.s.push(DenseMatrix::scaled_identity(b.dim, eta));
        st.z.push(DenseMatrix::scaled_identity(b.dim, eta));
    }

    let data_scale = {
        let mut sc = 1.0_f64;
        for b in &form.blocks {
            sc = sc.max(b.f0.frob_norm());
        }
        sc = sc.max(form.eq_b.iter().fold(0.0_f64, |a, &v| a.max(v.abs())));
        sc = sc.max(form.cost.iter().fold(0.0_f64, |a, &v| a.max(v.abs())));
        sc
    };

    let mut trail: Vec<super::IterationStat> = Vec::new();
    let mu0 = {
        let mut dot = st.kappa * st.tau;
        for (s, z) in st.s.iter().zip(&st.z) {
            dot += s.dot(z);
        }
        dot / barrier
    };

    let mut last_report = ResidualReport::default();
    // Best-merit iterate; the Schur system's conditioning eventually floors
    // the attainable residuals and further steps only drift, so the answer
    // is the best snapshot, not the last one.
    let mut best: Option<(State, ResidualReport, usize)> = None;
    let mut best_merit = f64::INFINITY;
    let mut stall = 0usize;
    let degraded_band = 1e4;

    macro_rules! wrap_up {
        ($iter:expr, $trail:expr, $fallback:expr) => {{
            let (state, report, it) = match best.take() {
                Some(b) => b,
                None => (st.clone(), last_report, $iter),
            };
            let ok = report.primal <= degraded_band * opts.feas_tol
                && report.dual <= degraded_band * opts.feas_tol
                && report.gap <= degraded_band * opts.gap_tol;
            let status = if ok { SolveStatus::Optimal } else { $fallback };
            return Ok(finish(form, &state, status, report, it, $trail, None, None));
        }};
    }

    for iter in 0..opts.max_iterations {
        // ---- residuals -------------------------------------------------
        // R1_k = −(Σ xᵢFᵢ + S + τF₀)
        let mut r1: Vec<DenseMatrix> = Vec::with_capacity(nblocks);
        for (k, b) in form.blocks.iter().enumerate() {
            let mut g = b.f0.scale(st.tau);
            for (fi, &xi) in b.fi.iter().zip(&st.x) {
                if xi != 0.0 {
                    g = &g + &fi.scale(xi);
                }
            }
            g = &g + &st.s[k];
            r1.push(g.scale(-1.0));
        }
        // R2 = bτ − Ex
        let ex = form.eq_a.matvec(&st.x);
        let r2: Vec<f64> = (0..p).map(|i| form.eq_b[i] * st.tau - ex[i]).collect();
        // R3_i = −(Σ⟨Fᵢ,Z⟩ − (Eᵀy)ᵢ + cᵢτ)
        let mut fz = vec![0.0_f64; m];
        for (k, b) in form.blocks.iter().enumerate() {
            for (i, fi) in b.fi.iter().enumerate() {
                fz[i] += fi.dot(&st.z[k]);
            }
        }
        let ety = form.eq_a.transpose().matvec(&st.y);
        let r3: Vec<f64> = (0..m).map(|i| -(fz[i] - ety[i] + form.cost[i] * st.tau)).collect();
        // R4 = −(Σ⟨F₀,Z⟩ + bᵀy − cᵀx − κ)
        let f0z: f64 = form.blocks.iter().zip(&st.z).map(|(b, z)| b.f0.dot(z)).sum();
        let bty: f64 = form.eq_b.iter().zip(&st.y).map(|(b, y)| b * y).sum();
        let ctx: f64 = form.cost.iter().zip(&st.x).map(|(c, x)| c * x).sum();
        let r4 = -(f0z + bty - ctx - st.kappa);

        // ---- convergence / certificate tests ---------------------------
        let tau = st.tau;
        let pobj = ctx / tau;
        let dobj = (f0z + bty) / tau;
        trail.push(super::IterationStat {
            pobj,
            dobj,
            kappa_over_tau: st.kappa / tau,
            gap_row_residual: r4.abs() / tau,
        });

        let prim_res = {
            let mut worst: f64 = 0.0;
            for (k, b) in form.blocks.iter().enumerate() {
                worst = worst.max(r1[k].frob_norm() / tau / (1.0 + b.f0.frob_norm()));
            }
            let eq_worst = r2
                .iter()
                .zip(form.eq_b.iter())
                .fold(0.0_f64, |a, (&r, &b)| a.max(r.abs() / tau / (1.0 + b.abs())));
            worst.max(eq_worst)
        };
        let dual_res = r3
            .iter()
            .zip(form.cost.iter())
            .fold(0.0_f64, |a, (&r, &c)| a.max(r.abs() / tau / (1.0 + c.abs())));
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        last_report = ResidualReport { primal: prim_res, dual: dual_res, gap: rel_gap };

        if prim_res <= opts.feas_tol && dual_res <= opts.dual_feas_limit() && rel_gap <= opts.gap_tol {
            return Ok(finish(form, &st, SolveStatus::Optimal, last_report, iter, trail, None, None));
        }

        let merit = prim_res.max(dual_res).max(rel_gap);
        if st.tau >= 1e-7 * st.kappa.max(1.0) {
            if merit < 0.95 * best_merit {
                best_merit = merit;
                best = Some((st.clone(), last_report, iter));
                stall = 0;
            } else {
                stall += 1;
            }
            if stall >= 6 {
                wrap_up!(iter, trail, SolveStatus::NumericalFailure);
            }
        }

        let mu = {
            let mut dot = st.kappa * st.tau;
            for (s, z) in st.s.iter().zip(&st.z) {
                dot += s.dot(z);
            }
            dot / barrier
        };

        // Infeasibility / unboundedness: the homogenization ratio τ/κ → 0
        // flags a ray; accept it only when the certificate closes to
        // tolerance on the raw (unnormalized) iterate.
        if st.tau < 1e-7 * st.kappa.max(1.0) {
            let cert_obj = f0z + bty;
            // dual-side ray: Σ⟨Fᵢ,Z⟩ − Eᵀy ≈ 0 with positive objective
            let ray_res = (0..m).fold(0.0_f64, |a, i| a.max((fz[i] - ety[i]).abs()));
            let znorm: f64 = st.z.iter().map(|z| z.frob_norm()).sum::<f64>()
                + st.y.iter().map(|v| v.abs()).sum::<f64>();
            if cert_obj > 1e-9 * (1.0 + data_scale) * znorm.max(1.0)
                && ray_res <= 1e-7 * cert_obj.max(1.0) * (1.0 + data_scale)
            {
                let scale = 1.0 / cert_obj;
                let duals: Vec<SymmetricMatrix> =
                    st.z.iter().map(|z| SymmetricMatrix::symmetrize(&z.scale(scale))).collect();
                let eq_duals: Vec<f64> = st.y.iter().map(|v| v * scale).collect();
                let farkas =
                    FarkasCertificate { duals, eq_duals, objective: 1.0, residual: ray_res * scale };
                return Ok(finish(form, &st, SolveStatus::Infeasible, last_report, iter, trail, Some(farkas), None));
            }
            // primal-side ray: F(x) direction with cᵀx < 0
            if ctx < -1e-9 * (1.0 + data_scale) {
                let mut ray_res = 0.0_f64;
                for (k, b) in form.blocks.iter().enumerate() {
                    let mut g = st.s[k].clone();
                    for (fi, &xi) in b.fi.iter().zip(&st.x) {
                        if xi != 0.0 {
                            g = &g + &fi.scale(xi);
                        }
                    }
                    ray_res = ray_res.max(g.frob_norm());
                }
                ray_res = ray_res.max(ex.iter().fold(0.0_f64, |a, &v| a.max(v.abs())));
                if ray_res <= 1e-7 * ctx.abs() * (1.0 + data_scale) {
                    let scale = 1.0 / (-ctx);
                    let ray = ImprovingRay {
                        x: st.x.iter().map(|v| v * scale).collect(),
                        residual: ray_res * scale,
                    };
                    return Ok(finish(form, &st, SolveStatus::Unbounded, last_report, iter, trail, None, Some(ray)));
                }
            }
            if mu < 1e-12 * mu0.max(1.0) {
                return Ok(finish(form, &st, SolveStatus::NumericalFailure, last_report, iter, trail, None, None));
            }
        } else if mu < 1e-13 * mu0.max(1.0) {
            // Complementarity exhausted on the optimal branch.
            wrap_up!(iter, trail, SolveStatus::NumericalFailure);
        }

        // ---- Schur complement assembly ---------------------------------
        // Per block: S⁻¹, then U_j = S⁻¹ Fⱼ Z for j = 0..m (0 ↦ F₀), giving
        //   B_ij = tr(Fᵢ Z Fⱼ S⁻¹) = ⟨Fᵢ, U_jᵀ⟩ ... assembled as dot(Fᵢ, U_j)
        //   with U_j = (Z Fⱼ S⁻¹)ᵀ = S⁻¹ Fⱼ Z.
        let dim_sys = m + p + 1;
        let mut big = DenseMatrix::zeros(dim_sys, dim_sys);
        let mut s_inv: Vec<DenseMatrix> = Vec::with_capacity(nblocks);
        // aggregated B (m×m), u (m), B0 row (m), u0 scalar
        let mut bmat = DenseMatrix::zeros(m, m);
        let mut uvec = vec![0.0_f64; m];
        let mut b0 = vec![0.0_f64; m];
        let mut u0 = 0.0_f64;
        for (k, b) in form.blocks.iter().enumerate() {
            if b.dim == 0 {
                s_inv.push(DenseMatrix::zeros(0, 0));
                continue;
            }
            let l = match cholesky(&st.s[k]) {
                Some(l) => l,
                None => wrap_up!(iter, trail, SolveStatus::NumericalFailure),
            };
            let mut inv = DenseMatrix::zeros(b.dim, b.dim);
            for c in 0..b.dim {
                let mut e = vec![0.0; b.dim];
                e[c] = 1.0;
                let w = crate::matcore::forward_substitute(&l, &e);
                let col = crate::matcore::back_substitute_lt(&l, &w);
                for r in 0..b.dim {
                    inv.set(r, c, col[r]);
                }
            }
            let u_of = |f: &DenseMatrix| -> DenseMatrix { &(&inv * f) * &st.z[k] };
            let u0_mat = u_of(&b.f0);
            let u_mats: Vec<DenseMatrix> = b.fi.iter().map(|f| u_of(f)).collect();
            for i in 0..m {
                for j in 0..m {
                    bmat.add_at(i, j, b.fi[i].dot(&u_mats[j]));
                }
                uvec[i] += b.fi[i].dot(&u0_mat);
                b0[i] += b.f0.dot(&u_mats[i]);
            }
            u0 += b.f0.dot(&u0_mat);
            s_inv.push(inv);
        }
        // rows 0..m: [B | −Eᵀ | u + c]
        for i in 0..m {
            for j in 0..m {
                big.set(i, j, bmat.get(i, j));
            }
            for l in 0..p {
                big.set(i, m + l, -form.eq_a.get(l, i));
            }
            big.set(i, m + p, uvec[i] + form.cost[i]);
        }
        // rows m..m+p: [E | 0 | −b]
        for l in 0..p {
            for j in 0..m {
                big.set(m + l, j, form.eq_a.get(l, j));
            }
            big.set(m + l, m + p, -form.eq_b[l]);
        }
        // last row: [B0 − c | b | u0 + κ/τ]
        for j in 0..m {
            big.set(m + p, j, b0[j] - form.cost[j]);
        }
        for l in 0..p {
            big.set(m + p, m + l, form.eq_b[l]);
        }
        big.set(m + p, m + p, u0 + st.kappa / st.tau);

        // static regularization + LU factorization
        let reg = 1e-12 * (1.0 + big.frob_norm() / dim_sys as f64);
        let mut big_reg = big.clone();
        for i in 0..dim_sys {
            big_reg.add_at(i, i, reg);
        }
        let lu = Lu::new(&big_reg)?;
        if lu.is_singular(1e-16) {
            wrap_up!(iter, trail, SolveStatus::NumericalFailure);
        }

        let solve_direction = |r5: &[DenseMatrix], r6: f64| -> Result<Direction> {
            // w_i = Σ_k tr(Fᵢ (R5 − Z R1) S⁻¹) = dot(Fᵢ, S⁻¹(R5ᵀ − R1 Z))
            let mut w = vec![0.0_f64; m];
            let mut w0 = 0.0_f64;
            let mut wt: Vec<DenseMatrix> = Vec::with_capacity(nblocks);
            for (k, b) in form.blocks.iter().enumerate() {
                if b.dim == 0 {
                    wt.push(DenseMatrix::zeros(0, 0));
                    continue;
                }
                let inner = &r5[k].transpose() - &(&r1[k] * &st.z[k]);
                let wtk = &s_inv[k] * &inner;
                for i in 0..m {
                    w[i] += b.fi[i].dot(&wtk);
                }
                w0 += b.f0.dot(&wtk);
                wt.push(wtk);
            }
            let mut rhs = vec![0.0_f64; dim_sys];
            for i in 0..m {
                rhs[i] = r3[i] - w[i];
            }
            for l in 0..p {
                rhs[m + l] = r2[l];
            }
            rhs[m + p] = r4 - w0 + r6 / st.tau;

            let mut sol = lu.solve_vec(&rhs)?;
            // one refinement pass against the unregularized matrix
            let resid: Vec<f64> = {
                let bx = big.matvec(&sol);
                rhs.iter().zip(&bx).map(|(r, b)| r - b).collect()
            };
            let corr = lu.solve_vec(&resid)?;
            for (s, c) in sol.iter_mut().zip(&corr) {
                *s += c;
            }

            let dx = sol[..m].to_vec();
            let dy = sol[m..m + p].to_vec();
            let dtau = sol[m + p];
            let dkappa = (r6 - st.kappa * dtau) / st.tau;
            let mut ds = Vec::with_capacity(nblocks);
            let mut dz = Vec::with_capacity(nblocks);
            for (k, b) in form.blocks.iter().enumerate() {
                let mut a = b.f0.scale(dtau);
                for (fi, &dxi) in b.fi.iter().zip(&dx) {
                    if dxi != 0.0 {
                        a = &a + &fi.scale(dxi);
                    }
                }
                let dsk = &r1[k] - &a;
                // ΔZ = (R5 − ZΔS)S⁻¹, symmetrized
                let dzk = &(&r5[k] - &(&st.z[k] * &dsk)) * &s_inv[k];
                dz.push(dzk.sym_part());
                ds.push(dsk.sym_part());
            }
            Ok(Direction { dx, dy, dtau, dkappa, ds, dz })
        };

        // ---- predictor ---------------------------------------------------
        let r5_aff: Vec<DenseMatrix> =
            (0..nblocks).map(|k| (&st.z[k] * &st.s[k]).scale(-1.0)).collect();
        let aff = match solve_direction(&r5_aff, -st.tau * st.kappa) {
            Ok(d) => d,
            Err(_) => wrap_up!(iter, trail, SolveStatus::NumericalFailure),
        };
        let mut alpha_aff = f64::INFINITY;
        for k in 0..nblocks {
            match (step_to_boundary(&st.s[k], &aff.ds[k]), step_to_boundary(&st.z[k], &aff.dz[k])) {
                (Ok(a), Ok(b)) => alpha_aff = alpha_aff.min(a).min(b),
                _ => wrap_up!(iter, trail, SolveStatus::NumericalFailure),
            }
        }
        alpha_aff = alpha_aff.min(scalar_step(st.tau, aff.dtau));
        alpha_aff = alpha_aff.min(scalar_step(st.kappa, aff.dkappa));
        alpha_aff = alpha_aff.min(1.0);

        let mu_aff = {
            let mut dot = (st.tau + alpha_aff * aff.dtau) * (st.kappa + alpha_aff * aff.dkappa);
            for k in 0..nblocks {
                let s_new = &st.s[k] + &aff.ds[k].scale(alpha_aff);
                let z_new = &st.z[k] + &aff.dz[k].scale(alpha_aff);
                dot += s_new.dot(&z_new);
            }
            dot / barrier
        };
        let sigma = ((mu_aff / mu).powi(3)).clamp(1e-12, 1.0);

        // ---- corrector ---------------------------------------------------
        let r5_cor: Vec<DenseMatrix> = (0..nblocks)
            .map(|k| {
                let mut r = DenseMatrix::scaled_identity(form.blocks[k].dim, sigma * mu);
                r = &r - &(&st.z[k] * &st.s[k]);
                r = &r - &(&aff.dz[k] * &aff.ds[k]);
                r
            })
            .collect();
        let r6_cor = sigma * mu - st.tau * st.kappa - aff.dtau * aff.dkappa;
        let dir = match solve_direction(&r5_cor, r6_cor) {
            Ok(d) => d,
            Err(_) => wrap_up!(iter, trail, SolveStatus::NumericalFailure),
        };

        let mut alpha = f64::INFINITY;
        for k in 0..nblocks {
            match (step_to_boundary(&st.s[k], &dir.ds[k]), step_to_boundary(&st.z[k], &dir.dz[k])) {
                (Ok(a), Ok(b)) => alpha = alpha.min(a).min(b),
                _ => wrap_up!(iter, trail, SolveStatus::NumericalFailure),
            }
        }
        alpha = alpha.min(scalar_step(st.tau, dir.dtau));
        alpha = alpha.min(scalar_step(st.kappa, dir.dkappa));
        alpha = (opts.step_fraction * alpha).min(1.0);
        if !alpha.is_finite() || alpha <= 1e-13 {
            wrap_up!(iter, trail, SolveStatus::NumericalFailure);
        }

        for (xi, dxi) in st.x.iter_mut().zip(&dir.dx) {
            *xi += alpha * dxi;
        }
        for (yi, dyi) in st.y.iter_mut().zip(&dir.dy) {
            *yi += alpha * dyi;
        }
        st.tau += alpha * dir.dtau;
        st.kappa += alpha * dir.dkappa;
        for k in 0..nblocks {
            st.s[k] = (&st.s[k] + &dir.ds[k].scale(alpha)).sym_part();
            st.z[k] = (&st.z[k] + &dir.dz[k].scale(alpha)).sym_part();
        }
        if !st.tau.is_finite() || st.tau <= 0.0 || st.kappa < 0.0 {
            wrap_up!(iter, trail, SolveStatus::NumericalFailure);
        }
    }

    {
        let iter = opts.max_iterations;
        wrap_up!(iter, trail, SolveStatus::MaxIterations);
    }
}

impl SolverOptions {
    fn dual_feas_limit(&self) -> f64 {
        self.feas_tol
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    form: &SdpStandardForm,
    st: &State,
    status: SolveStatus,
    residuals: ResidualReport,
    iterations: usize,
    trail: Vec<super::IterationStat>,
    farkas: Option<FarkasCertificate>,
    ray: Option<ImprovingRay>,
) -> Solution {
    let tau = if st.tau > 0.0 { st.tau } else { 1.0 };
    let x: Vec<f64> = st.x.iter().map(|v| v / tau).collect();
    let y: Vec<f64> = st.y.iter().map(|v| v / tau).collect();
    let slacks: Vec<SymmetricMatrix> =
        st.s.iter().map(|s| SymmetricMatrix::symmetrize(&s.scale(1.0 / tau))).collect();
    let duals: Vec<SymmetricMatrix> =
        st.z.iter().map(|z| SymmetricMatrix::symmetrize(&z.scale(1.0 / tau))).collect();
    let objective: f64 = form.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    let dual_objective: f64 = form.blocks.iter().zip(&duals).map(|(b, z)| b.f0.dot(z.as_mat())).sum::<f64>()
        + form.eq_b.iter().zip(&y).map(|(b, v)| b * v).sum::<f64>();
    Solution {
        status,
        x,
        slacks,
        duals,
        eq_duals: y,
        objective,
        dual_objective,
        residuals,
        iterations,
        farkas,
        ray,
        trail,
    }
}
