//! D-stability: eigenvalue confinement to an LMI region
//! `{z : Λ + zΦ + z̄Φᵀ ≺ 0}` through the Kronecker-structured inequality
//! `Λ⊗P + Φ⊗(AP) + Φᵀ⊗(PAᵀ) ≺ 0`, with the dilated slack-variable forms
//! for the three named regions.

use super::engine::{judge_eps, CertBuilder};
use super::{Certificate, LmiRegion, Verdict};
use crate::lmimodel::{AffineExpr, BlockEntry};
use crate::matcore::{inverse, DenseMatrix, SymmetricMatrix};
use crate::sdpsolver::SolverOptions;
use crate::{Error, Result};

/// Region of eigenvalue confinement.
#[derive(Clone, Debug)]
pub enum Region {
    /// Arbitrary LMI region.
    Lmi(LmiRegion),
    /// `Re λ < −α`.
    Alpha(f64),
    /// `|λ − c| < r` (the certificate requires `c < −r`).
    Disk { c: f64, r: f64 },
    /// `|Im λ| < k·|Re λ|` with `Re λ < 0`.
    Conic(f64),
}

impl Region {
    /// The (Λ, Φ) data of the region.
    pub fn as_lmi_region(&self) -> Result<LmiRegion> {
        match self {
            Region::Lmi(r) => Ok(r.clone()),
            Region::Alpha(alpha) => LmiRegion::new(
                SymmetricMatrix::new(DenseMatrix::scalar(2.0 * alpha))?,
                DenseMatrix::scalar(1.0),
            ),
            Region::Disk { c, r } => LmiRegion::new(
                SymmetricMatrix::new(DenseMatrix::from_rows(&[vec![-*r, -*c], vec![-*c, -*r]]))?,
                DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]),
            ),
            Region::Conic(k) => LmiRegion::new(
                SymmetricMatrix::zeros(2),
                DenseMatrix::from_rows(&[vec![*k, 1.0], vec![-1.0, *k]]),
            ),
        }
    }
}

/// Options for the dilated forms.
#[derive(Clone, Debug)]
pub struct DStabilityOptions {
    /// Use the slack-variable dilated formulation where the region supports
    /// one (α, disk, conic regions).
    pub dilated: bool,
    /// Grid of ε values tried for the dilated forms (the slack construction
    /// contains bilinear `ε·F` products, so ε is enumerated, not solved).
    pub epsilons: Vec<f64>,
}

impl Default for DStabilityOptions {
    fn default() -> Self {
        Self { dilated: false, epsilons: vec![1.0, 0.3, 0.1, 0.03, 0.01, 1e-3] }
    }
}

/// Kronecker-structured region LMI: block (k,l) is
/// `λ_{kl}·P + φ_{kl}·A P + φ_{lk}·P Aᵀ`.
fn region_block(
    region: &LmiRegion,
    a: &DenseMatrix,
    p: crate::lmimodel::VarRef,
) -> Result<AffineExpr> {
    let m = region.lambda.dim();
    let pe = AffineExpr::var(p);
    let ap = pe.lmul(a);
    let pat = pe.rmul(&a.transpose());
    let mut grid: Vec<Vec<BlockEntry>> = Vec::with_capacity(m);
    for k in 0..m {
        let mut row = Vec::with_capacity(m);
        for l in 0..m {
            let lam = region.lambda.as_mat().get(k, l);
            let phi_kl = region.phi.get(k, l);
            let phi_lk = region.phi.get(l, k);
            let cell = &(&pe.scale(lam) + &ap.scale(phi_kl)) + &pat.scale(phi_lk);
            row.push(BlockEntry::E(cell));
        }
        grid.push(row);
    }
    AffineExpr::block(&grid)
}

/// D-stability certificate. `Holds` ⇒ every eigenvalue satisfies the region
/// inequality (the caller can replay with [`LmiRegion::contains`]).
pub fn d_stability(
    a: &DenseMatrix,
    region: &Region,
    options: &DStabilityOptions,
    opts: &SolverOptions,
) -> Result<Certificate> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("D-stability of non-square matrix".into()));
    }
    if let Region::Disk { c, r } = region {
        if !(*r > 0.0) || !(*c < -*r) {
            return Err(Error::Precondition("disk region needs r > 0 and c < −r".into()));
        }
    }
    if let Region::Conic(k) = region {
        if !(*k > 0.0) {
            return Err(Error::Precondition("conic region needs k > 0".into()));
        }
    }
    let lmi_region = region.as_lmi_region()?;
    let n = a.rows();
    let eps = judge_eps(a.frob_norm().max(1.0));

    if options.dilated {
        if let Some(cert) = dilated_certificate(a, region, options, opts, eps)? {
            return Ok(cert);
        }
        // fall through to the compact form when no region-specific dilation
    }

    let mut cb = CertBuilder::new(eps);
    let p = cb.prob.symmetric(n, "P")?;
    cb.watch("P", p);
    cb.property_pinned(AffineExpr::var(p).neg(), 1.0, "P pd");
    let block = region_block(&lmi_region, a, p)?;
    cb.property_pinned(block, 1.0, "region block");
    cb.feasibility("kronecker_region", opts)
}

/// Region-specific dilated forms with the paper's slack variable `F`; the
/// scalar ε enters bilinearly and is enumerated over the option grid.
fn dilated_certificate(
    a: &DenseMatrix,
    region: &Region,
    options: &DStabilityOptions,
    opts: &SolverOptions,
    eps: f64,
) -> Result<Option<Certificate>> {
    let n = a.rows();
    let mut last: Option<Certificate> = None;
    for &e in &options.epsilons {
        let mut cb = CertBuilder::new(eps);
        let x = cb.prob.symmetric(n, "X")?;
        let f = cb.prob.rectangular(n, n, "F")?;
        cb.watch("X", x);
        cb.watch("F", f);
        let xe = AffineExpr::var(x);
        let fe = AffineExpr::var(f);
        let block = match region {
            Region::Alpha(alpha) => {
                // base: [[0, −X, X],[∗, 0, 0],[∗, ∗, −(1/(2α))X]] + He{[A;1;0]F[1, −ε1, ε1]}
                let z = AffineExpr::zero(n, n);
                let base = AffineExpr::block(&[
                    vec![BlockEntry::E(z.clone()), BlockEntry::E(xe.neg()), BlockEntry::E(xe.clone())],
                    vec![BlockEntry::Mirror, BlockEntry::E(z.clone()), BlockEntry::E(z.clone())],
                    vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(xe.scale(-0.5 / alpha))],
                ])?;
                let left = DenseMatrix::vstack(&[a, &DenseMatrix::identity(n), &DenseMatrix::zeros(n, n)]);
                let right = DenseMatrix::hstack(&[
                    &DenseMatrix::identity(n),
                    &DenseMatrix::scaled_identity(n, -e),
                    &DenseMatrix::scaled_identity(n, e),
                ]);
                let term = fe.lmul(&left).rmul(&right);
                &base + &term.he()
            }
            Region::Disk { c, r } => {
                let z = AffineExpr::zero(n, n);
                let factor = c / (c * c - r * r);
                let base = AffineExpr::block(&[
                    vec![
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(xe.neg()),
                        BlockEntry::E(xe.clone()),
                        BlockEntry::E(z.clone()),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(xe.neg()),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::Mirror,
                        BlockEntry::E(xe.scale(factor)),
                        BlockEntry::E(z.clone()),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::Mirror,
                        BlockEntry::Mirror,
                        BlockEntry::E(xe.scale(*c)),
                    ],
                ])?;
                let left = DenseMatrix::vstack(&[
                    a,
                    &DenseMatrix::identity(n),
                    &DenseMatrix::zeros(n, n),
                    &DenseMatrix::zeros(n, n),
                ]);
                let right = DenseMatrix::hstack(&[
                    &DenseMatrix::identity(n),
                    &DenseMatrix::scaled_identity(n, -e),
                    &DenseMatrix::scaled_identity(n, e),
                    &DenseMatrix::identity(n),
                ]);
                let term = fe.lmul(&left).rmul(&right);
                &base + &term.he()
            }
            Region::Conic(k) => {
                let z = AffineExpr::zeros_like(n);
                let base = AffineExpr::block(&[
                    vec![
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(xe.scale(-k)),
                        BlockEntry::E(xe.clone()),
                        BlockEntry::E(z.clone()),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(xe.neg()),
                    ],
                    vec![
                        BlockEntry::Mirror,
                        BlockEntry::Mirror,
                        BlockEntry::E(z.clone()),
                        BlockEntry::E(xe.scale(-k)),
                    ],
                    vec![BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::Mirror, BlockEntry::E(z.clone())],
                ])?;
                // He{[A 0;1 0;0 1;0 A]·diag(F,F)·[k1 −εk1 ε1 1; −1 −ε1 εk1 k1]}
                let left = DenseMatrix::block(&[
                    vec![a, &DenseMatrix::zeros(n, n)],
                    vec![&DenseMatrix::identity(n), &DenseMatrix::zeros(n, n)],
                    vec![&DenseMatrix::zeros(n, n), &DenseMatrix::identity(n)],
                    vec![&DenseMatrix::zeros(n, n), a],
                ]);
                let right = DenseMatrix::block(&[
                    vec![
                        &DenseMatrix::scaled_identity(n, *k),
                        &DenseMatrix::scaled_identity(n, -e * k),
                        &DenseMatrix::scaled_identity(n, e),
                        &DenseMatrix::identity(n),
                    ],
                    vec![
                        &DenseMatrix::scaled_identity(n, -1.0),
                        &DenseMatrix::scaled_identity(n, -e),
                        &DenseMatrix::scaled_identity(n, e * k),
                        &DenseMatrix::scaled_identity(n, *k),
                    ],
                ]);
                // diag(F, F) as a single expression: embed two copies
                let fdiag = {
                    let top = fe.lmul(&DenseMatrix::vstack(&[
                        &DenseMatrix::identity(n),
                        &DenseMatrix::zeros(n, n),
                    ]))
                    .rmul(&DenseMatrix::hstack(&[
                        &DenseMatrix::identity(n),
                        &DenseMatrix::zeros(n, n),
                    ]));
                    let bot = fe.lmul(&DenseMatrix::vstack(&[
                        &DenseMatrix::zeros(n, n),
                        &DenseMatrix::identity(n),
                    ]))
                    .rmul(&DenseMatrix::hstack(&[
                        &DenseMatrix::zeros(n, n),
                        &DenseMatrix::identity(n),
                    ]));
                    &top + &bot
                };
                let term = fdiag.lmul(&left).rmul(&right);
                &base + &term.he()
            }
            Region::Lmi(_) => return Ok(None),
        };
        let mut cb2 = cb;
        cb2.property_pinned(AffineExpr::var(x).neg(), 1.0, "X pd");
        cb2.property_pinned(block, 1.0, "dilated region block");
        cb2.note(format!("dilated form with ε = {e}"));
        let cert = cb2.feasibility("dilated_region", opts)?;
        if cert.verdict == Verdict::Holds {
            return Ok(Some(cert));
        }
        last = Some(cert);
    }
    Ok(last)
}

/// The slack witness the dilated construction predicts from a compact-form
/// solution: `F = −ε⁻¹ (A − ε⁻¹·I)⁻¹ X`.
pub(crate) fn dilated_slack_witness(a: &DenseMatrix, x: &DenseMatrix, e: f64) -> Result<DenseMatrix> {
    let n = a.rows();
    let shifted = a - &DenseMatrix::scaled_identity(n, 1.0 / e);
    let inv = inverse(&shifted)?;
    Ok((&inv * x).scale(-1.0 / e))
}

impl AffineExpr {
    fn zeros_like(n: usize) -> AffineExpr {
        AffineExpr::zero(n, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigenvalues;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn alpha_region_scalar_cases() {
        let a = DenseMatrix::scalar(-3.0);
        let hold = d_stability(&a, &Region::Alpha(2.0), &DStabilityOptions::default(), &opts()).unwrap();
        assert_eq!(hold.verdict, Verdict::Holds);
        let fail = d_stability(&a, &Region::Alpha(4.0), &DStabilityOptions::default(), &opts()).unwrap();
        assert_eq!(fail.verdict, Verdict::Fails);
    }

    #[test]
    fn conic_region_complex_pair() {
        // eigenvalues −1 ± j: |Im| = 1 vs k·|Re| = k
        let a = DenseMatrix::from_rows(&[vec![-1.0, 1.0], vec![-1.0, -1.0]]);
        let narrow = d_stability(&a, &Region::Conic(0.5), &DStabilityOptions::default(), &opts()).unwrap();
        assert_eq!(narrow.verdict, Verdict::Fails);
        let wide = d_stability(&a, &Region::Conic(1.5), &DStabilityOptions::default(), &opts()).unwrap();
        assert_eq!(wide.verdict, Verdict::Holds);
        // eigenvalue oracle against the region predicate
        let region = Region::Conic(1.5).as_lmi_region().unwrap();
        for v in eigenvalues(&a).unwrap() {
            assert!(region.contains((v.re, v.im)).unwrap());
        }
    }

    #[test]
    fn disk_center_case() {
        let a = DenseMatrix::scalar(-2.0);
        let cert = d_stability(
            &a,
            &Region::Disk { c: -2.0, r: 1.0 },
            &DStabilityOptions::default(),
            &opts(),
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Holds);
        // outside: eigenvalue −4 against the same disk
        let cert = d_stability(
            &DenseMatrix::scalar(-4.0),
            &Region::Disk { c: -2.0, r: 1.0 },
            &DStabilityOptions::default(),
            &opts(),
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Fails);
    }

    #[test]
    fn dilated_alpha_matches_compact() {
        let a = DenseMatrix::from_rows(&[vec![-3.0, 1.0], vec![0.0, -4.0]]);
        let compact = d_stability(&a, &Region::Alpha(2.0), &DStabilityOptions::default(), &opts()).unwrap();
        let dilated = d_stability(
            &a,
            &Region::Alpha(2.0),
            &DStabilityOptions { dilated: true, ..Default::default() },
            &opts(),
        )
        .unwrap();
        assert_eq!(compact.verdict, Verdict::Holds);
        assert_eq!(dilated.verdict, Verdict::Holds);
        assert!(dilated.witness("F").is_some());
    }

    #[test]
    fn holds_implies_eigenvalues_in_region() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(202);
        for _ in 0..8 {
            let n = 3;
            let mut a = DenseMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a.set(r, c, rng.gen_range(-1.5..0.5));
                }
            }
            let alpha = rng.gen_range(0.1..1.0);
            let region = Region::Alpha(alpha);
            let cert = d_stability(&a, &region, &DStabilityOptions::default(), &opts()).unwrap();
            let lmi_region = region.as_lmi_region().unwrap();
            if cert.verdict == Verdict::Holds {
                for v in eigenvalues(&a).unwrap() {
                    assert!(lmi_region.contains((v.re, v.im)).unwrap());
                }
            }
            if cert.verdict == Verdict::Fails {
                let any_out = eigenvalues(&a)
                    .unwrap()
                    .iter()
                    .any(|v| !lmi_region.contains((v.re, v.im)).unwrap());
                assert!(any_out);
            }
        }
    }
}
