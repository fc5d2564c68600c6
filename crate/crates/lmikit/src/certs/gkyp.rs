//! Finite-frequency-band certificates (generalized KYP): conic-sector or
//! negative-imaginary behavior restricted to a low/intermediate/high band.
//! The intermediate band uses Hermitian multipliers realized through the
//! real embedding.

use super::engine::{judge_eps, CertBuilder};
use super::Certificate;
use crate::lmimodel::{real_embedding_expr, AffineExpr, BlockEntry};
use crate::matcore::{DenseMatrix, Domain};
use crate::sdpsolver::SolverOptions;
use crate::sysmodel::StateSpace;
use crate::{Error, Result};

/// Frequency band of interest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Band {
    /// `|ω| < ω₁`.
    Low { omega1: f64 },
    /// `ω₁ ≤ |ω| < ω₂`.
    Mid { omega1: f64, omega2: f64 },
    /// `ω₂ ≤ |ω|`.
    High { omega2: f64 },
}

/// Property asserted on the band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BandProperty {
    /// Inside the cone `[a, b]` (b finite positive).
    Cone { a: f64, b: f64 },
    /// Negative imaginary.
    NegImag,
}

/// Offset pinning the open band boundary: `ω̄ = 1e-6·ω`.
fn strictness_offset(omega: f64) -> f64 {
    1e-6 * omega
}

/// Band-restricted property certificate.
pub fn gkyp_band(
    sys: &StateSpace,
    property: BandProperty,
    band: Band,
    opts: &SolverOptions,
) -> Result<Certificate> {
    if sys.domain != Domain::Ct {
        return Err(Error::Precondition("band certificates are CT-only here".into()));
    }
    if !sys.is_square() {
        return Err(Error::Precondition("band certificates need a square system".into()));
    }
    match band {
        Band::Low { omega1 } if omega1 <= 0.0 => {
            return Err(Error::Precondition("low band needs ω₁ > 0".into()))
        }
        Band::High { omega2 } if omega2 <= 0.0 => {
            return Err(Error::Precondition("high band needs ω₂ > 0".into()))
        }
        Band::Mid { omega1, omega2 } if !(omega1 > 0.0 && omega2 > omega1) => {
            return Err(Error::Precondition("mid band needs 0 < ω₁ < ω₂".into()))
        }
        _ => {}
    }
    let n = sys.order();
    let m = sys.inputs();
    let a = &sys.a;
    let b = &sys.b;
    let c = &sys.c;
    let d = &sys.d;

    // outer data factors: F = [A B; 1 0], G = [C D; 0 1] (cone) or
    // [CA CB; 0 1] (negative imaginary)
    let f_mat = DenseMatrix::block(&[
        vec![a, b],
        vec![&DenseMatrix::identity(n), &DenseMatrix::zeros(n, m)],
    ]);
    let (g_mat, pi) = match property {
        BandProperty::Cone { a: lo, b: hi } => {
            if !(lo < hi) || hi <= 0.0 {
                return Err(Error::Precondition("cone band needs a < b, b > 0".into()));
            }
            let g = DenseMatrix::block(&[
                vec![c, d],
                vec![&DenseMatrix::zeros(m, n), &DenseMatrix::identity(m)],
            ]);
            let pi = DenseMatrix::block(&[
                vec![
                    &DenseMatrix::scaled_identity(m, -1.0 / hi),
                    &DenseMatrix::scaled_identity(m, 0.5 * (1.0 + lo / hi)),
                ],
                vec![
                    &DenseMatrix::scaled_identity(m, 0.5 * (1.0 + lo / hi)),
                    &DenseMatrix::scaled_identity(m, -lo),
                ],
            ]);
            (g, pi)
        }
        BandProperty::NegImag => {
            let dev = d.max_asymmetry();
            if dev > 1e-9 * d.frob_norm().max(1.0) {
                return Err(Error::Precondition("negative imaginary needs symmetric D".into()));
            }
            let g = DenseMatrix::block(&[
                vec![&(c * a), &(c * b)],
                vec![&DenseMatrix::zeros(m, n), &DenseMatrix::identity(m)],
            ]);
            let pi = DenseMatrix::block(&[
                vec![&DenseMatrix::zeros(m, m), &DenseMatrix::identity(m)],
                vec![&DenseMatrix::identity(m), &DenseMatrix::zeros(m, m)],
            ]);
            (g, pi)
        }
    };
    let gpg = &(&g_mat.transpose() * &pi) * &g_mat;
    let scale = a.frob_norm().max(gpg.frob_norm()).max(1.0);
    let eps = judge_eps(scale);
    let mut cb = CertBuilder::new(eps);

    match band {
        Band::Low { omega1 } | Band::High { omega2: omega1 } => {
            let high = matches!(band, Band::High { .. });
            let pvar = cb.prob.symmetric(n, "P")?;
            let qvar = cb.prob.symmetric(n, "Q")?;
            cb.watch("P", pvar);
            cb.watch("Q", qvar);
            let pe = AffineExpr::var(pvar);
            let qe = AffineExpr::var(qvar);
            let w_eff = if high { omega1 } else { omega1 - strictness_offset(omega1) };
            let theta = if high {
                AffineExpr::block(&[
                    vec![BlockEntry::E(qe.clone()), BlockEntry::E(pe.clone())],
                    vec![BlockEntry::Mirror, BlockEntry::E(qe.scale(-w_eff * w_eff))],
                ])?
            } else {
                AffineExpr::block(&[
                    vec![BlockEntry::E(qe.neg()), BlockEntry::E(pe.clone())],
                    vec![BlockEntry::Mirror, BlockEntry::E(qe.scale(w_eff * w_eff))],
                ])?
            };
            let main = &theta.lmul(&f_mat.transpose()).rmul(&f_mat)
                - &AffineExpr::constant(gpg.clone());
            cb.property(main, "band block");
            cb.hard(qe.neg(), 0.0, "Q psd");
        }
        Band::Mid { omega1, omega2 } => {
            // Hermitian P, Q over the real embedding. Skew parts through
            // rectangular variables with equality rows.
            let omega2_eff = omega2 - strictness_offset(omega2);
            let omega_hat = 0.5 * (omega1 + omega2_eff);
            let pr = cb.prob.symmetric(n, "P_re")?;
            let pi_v = cb.prob.rectangular(n, n, "P_im")?;
            let qr = cb.prob.symmetric(n, "Q_re")?;
            let qi_v = cb.prob.rectangular(n, n, "Q_im")?;
            cb.watch("P_re", pr);
            cb.watch("P_im", pi_v);
            cb.watch("Q_re", qr);
            cb.watch("Q_im", qi_v);
            cb.hard_zero(&AffineExpr::var(pi_v) + &AffineExpr::var_t(pi_v), "P_im skew");
            cb.hard_zero(&AffineExpr::var(qi_v) + &AffineExpr::var_t(qi_v), "Q_im skew");
            let pre = AffineExpr::var(pr);
            let pim = AffineExpr::var(pi_v);
            let qre = AffineExpr::var(qr);
            let qim = AffineExpr::var(qi_v);
            // Θ_re = [[−Q_re, P_re − ω̂ Q_im],[∗, −ω₁ω₂′ Q_re]]
            let theta_re = AffineExpr::block(&[
                vec![
                    BlockEntry::E(qre.neg()),
                    BlockEntry::E(&pre - &qim.scale(omega_hat)),
                ],
                vec![BlockEntry::Mirror, BlockEntry::E(qre.scale(-omega1 * omega2_eff))],
            ])?;
            // Θ_im = [[−Q_im, P_im + ω̂ Q_re],[(P_im − ω̂Q_re), −ω₁ω₂′ Q_im]]
            let theta_im = AffineExpr::block(&[
                vec![
                    BlockEntry::E(qim.neg()),
                    BlockEntry::E(&pim + &qre.scale(omega_hat)),
                ],
                vec![
                    BlockEntry::E(&pim - &qre.scale(omega_hat)),
                    BlockEntry::E(qim.scale(-omega1 * omega2_eff)),
                ],
            ])?;
            let m_re = &theta_re.lmul(&f_mat.transpose()).rmul(&f_mat)
                - &AffineExpr::constant(gpg.clone());
            let m_im = theta_im.lmul(&f_mat.transpose()).rmul(&f_mat);
            let embedded = real_embedding_expr(&m_re, &m_im)?;
            cb.property(embedded, "band block (embedded)");
            // Q ⪰ 0 as a Hermitian matrix: embed (Q_re, Q_im)
            let q_emb = real_embedding_expr(&qre, &qim)?;
            cb.hard(q_emb.neg(), 0.0, "Q psd (embedded)");
        }
    }
    cb.feasibility("gkyp_band", opts)
}
