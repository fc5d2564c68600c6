//! Shared test fixtures: the solver reference-problem catalogue and random
//! system generators used across the integration and acceptance suites.

use lmikit::lmimodel::{AffineExpr, LmiProblem, Objective, SdpStandardForm};
use lmikit::matcore::{DenseMatrix, Domain};
use lmikit::sysmodel::StateSpace;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A reference SDP with a hand-derived optimal value.
pub struct ReferenceProblem {
    pub name: &'static str,
    pub form: SdpStandardForm,
    pub optimal_value: f64,
}

/// Ten hand-buildable reference problems (scalar caps, interval projections,
/// max-eigenvalue minimization, trace bounds, Lyapunov feasibility).
pub fn reference_problems() -> Vec<ReferenceProblem> {
    let mut out = Vec::new();

    // 1. scalar cap: min −x s.t. x·I ⪯ I  →  x* = 1, objective −1
    out.push(ReferenceProblem {
        name: "scalar cap",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::scaled_identity(2, -1.0),
            vec![DenseMatrix::identity(2)],
            vec![-1.0],
        ),
        optimal_value: -1.0,
    });

    // 2. interval projection: min x s.t. diag(x−1, −x) ⪯ 0 → x* = 0
    out.push(ReferenceProblem {
        name: "interval projection",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::diag(&[-1.0, 0.0]),
            vec![DenseMatrix::diag(&[1.0, -1.0])],
            vec![1.0],
        ),
        optimal_value: 0.0,
    });

    // 3. two-sided scalar: min −x s.t. −3 ⪯ ... x ⪯ 3 → objective −3
    out.push(ReferenceProblem {
        name: "symmetric cap",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::diag(&[-3.0, -3.0]),
            vec![DenseMatrix::diag(&[1.0, -1.0])],
            vec![-1.0],
        ),
        optimal_value: -3.0,
    });

    // 4. max-eigenvalue minimization: min t s.t. A0 + x·A1 ⪯ tI with
    //    A0 = diag(1,3), A1 = [[0,1],[1,0]]: spectrum 2 ± √(1+x²), t* = 3
    out.push(ReferenceProblem {
        name: "max-eigenvalue min",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::diag(&[1.0, 3.0]),
            vec![
                DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
                DenseMatrix::scaled_identity(2, -1.0),
            ],
            vec![0.0, 1.0],
        ),
        optimal_value: 3.0,
    });

    // 5. norm bound: min t s.t. [[-t, 1],[1, -t]] ⪯ 0 → t* = 1
    out.push(ReferenceProblem {
        name: "offdiag norm bound",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
            vec![DenseMatrix::scaled_identity(2, -1.0)],
            vec![1.0],
        ),
        optimal_value: 1.0,
    });

    // 6. equality + nonnegativity: min x1 + x2 s.t. x1 − x2 = 1, x ⪰ 0 → 1
    {
        let mut prob = LmiProblem::new();
        let x1 = prob.scalar("x1").unwrap();
        let x2 = prob.scalar("x2").unwrap();
        prob.require_neg_semidefinite(AffineExpr::var(x1).neg(), "x1 >= 0");
        prob.require_neg_semidefinite(AffineExpr::var(x2).neg(), "x2 >= 0");
        prob.require_zero(
            &(&AffineExpr::var(x1) - &AffineExpr::var(x2))
                - &AffineExpr::constant(DenseMatrix::scalar(1.0)),
            "x1-x2=1",
        );
        prob.minimize(Objective::default().add_scalar(1.0, x1).add_scalar(1.0, x2));
        out.push(ReferenceProblem {
            name: "equality projection",
            form: prob.to_standard_form().unwrap(),
            optimal_value: 1.0,
        });
    }

    // 7. trace bound: min tr(P) s.t. P ⪰ [[2,1],[1,2]] → tr* = 4
    {
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(2, "P").unwrap();
        let bound = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        prob.require_pos_semidefinite(&AffineExpr::var(p) - &AffineExpr::constant(bound), "P>=B");
        prob.minimize(Objective::default().add_trace(DenseMatrix::identity(2), p));
        out.push(ReferenceProblem {
            name: "trace floor",
            form: prob.to_standard_form().unwrap(),
            optimal_value: 4.0,
        });
    }

    // 8. Lyapunov feasibility for A = [[0,1],[−2,−3]]: AᵀP+PA ⪯ −I, P ⪰ I
    //    feasibility objective 0
    {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let mut prob = LmiProblem::new();
        let p = prob.symmetric(2, "P").unwrap();
        let pe = AffineExpr::var(p);
        let lyap = &(&pe.lmul(&a.transpose()) + &pe.rmul(&a)) + &AffineExpr::identity(2);
        prob.require_neg_semidefinite(lyap, "lyap");
        prob.require_pos_definite_eps(pe, 1.0, "pd");
        out.push(ReferenceProblem {
            name: "Lyapunov feasibility",
            form: prob.to_standard_form().unwrap(),
            optimal_value: 0.0,
        });
    }

    // 9. weighted scalar LP: min 2x1 + 3x2 s.t. x1 ≥ 1, x2 ≥ 2 → 8
    out.push(ReferenceProblem {
        name: "weighted floor",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::diag(&[1.0, 2.0]),
            vec![DenseMatrix::diag(&[-1.0, 0.0]), DenseMatrix::diag(&[0.0, -1.0])],
            vec![2.0, 3.0],
        ),
        optimal_value: 8.0,
    });

    // 10. max-eigenvalue of a shifted pencil with two unknowns:
    //     min t s.t. diag(5,1) + x·diag(−1,1) ⪯ tI; best at x = 2 → t* = 3
    out.push(ReferenceProblem {
        name: "pencil balance",
        form: SdpStandardForm::from_single_block(
            DenseMatrix::diag(&[5.0, 1.0]),
            vec![DenseMatrix::diag(&[-1.0, 1.0]), DenseMatrix::scaled_identity(2, -1.0)],
            vec![0.0, 1.0],
        ),
        optimal_value: 3.0,
    });

    out
}

/// Infeasible problems whose Farkas certificates must come back.
pub fn infeasible_problems() -> Vec<(&'static str, SdpStandardForm)> {
    vec![
        (
            // constant infeasible block: I ⪯ 0
            "constant infeasible",
            SdpStandardForm::from_single_block(DenseMatrix::identity(2), vec![], vec![]),
        ),
        (
            // x ≥ 1 and x ≤ 0
            "empty interval",
            SdpStandardForm::from_single_block(
                DenseMatrix::diag(&[1.0, 0.0]),
                vec![DenseMatrix::diag(&[-1.0, 1.0])],
                vec![0.0],
            ),
        ),
    ]
}

/// A primal-unbounded problem (improving ray expected).
pub fn unbounded_problem() -> SdpStandardForm {
    // min −x s.t. −x·I ⪯ 0 (x ≥ 0): unbounded below
    SdpStandardForm::from_single_block(
        DenseMatrix::zeros(2, 2),
        vec![DenseMatrix::scaled_identity(2, -1.0)],
        vec![-1.0],
    )
}

/// Random dense matrix with entries in [−1, 1].
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(-1.0..1.0));
        }
    }
    m
}

/// Random CT-stable matrix: shifted so the spectral abscissa is ≤ −margin.
pub fn random_hurwitz(rng: &mut ChaCha8Rng, n: usize, margin: f64) -> DenseMatrix {
    let a = random_matrix(rng, n, n);
    let vals = lmikit::matcore::eigenvalues(&a).unwrap();
    let abscissa = vals.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    &a - &DenseMatrix::scaled_identity(n, abscissa + margin)
}

/// Random DT-stable (Schur) matrix: scaled so the spectral radius is ≤ rho.
pub fn random_schur(rng: &mut ChaCha8Rng, n: usize, rho: f64) -> DenseMatrix {
    let a = random_matrix(rng, n, n);
    let vals = lmikit::matcore::eigenvalues(&a).unwrap();
    let radius = vals.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
    if radius == 0.0 {
        return a;
    }
    a.scale(rho / radius)
}

/// Random stable CT system with unit-ish scaling.
pub fn random_stable_system(rng: &mut ChaCha8Rng, n: usize, m: usize, p: usize, strictly_proper: bool) -> StateSpace {
    let margin = 0.3 + rng.gen_range(0.0..0.7);
    let a = random_hurwitz(rng, n, margin);
    let b = random_matrix(rng, n, m);
    let c = random_matrix(rng, p, n);
    let d = if strictly_proper { DenseMatrix::zeros(p, m) } else { random_matrix(rng, p, m) };
    StateSpace::new(a, b, c, d, Domain::Ct).unwrap()
}

/// Random Schur-stable DT system.
pub fn random_stable_system_dt(rng: &mut ChaCha8Rng, n: usize, m: usize, p: usize, strictly_proper: bool) -> StateSpace {
    let rho = rng.gen_range(0.4..0.85);
    let a = random_schur(rng, n, rho);
    let b = random_matrix(rng, n, m);
    let c = random_matrix(rng, p, n);
    let d = if strictly_proper { DenseMatrix::zeros(p, m) } else { random_matrix(rng, p, m) };
    StateSpace::new(a, b, c, d, Domain::Dt).unwrap()
}
