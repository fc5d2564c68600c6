//! Analysis-certificate catalogue. Each operation assembles the property's
//! LMI(s), solves them, and returns a [`Certificate`] carrying the verdict,
//! the certified scalar where the property is norm-like, the witness
//! variables, and a residual replay of the constraints at the witness.
//!
//! Verdict policy for feasibility certificates: the property blocks are
//! minimized over a uniform shift `t` (`E ⪯ t·I`), with homogeneous
//! formulations pinned by a `+I` offset so both outcomes separate cleanly.
//! `t* < −ε` ⇒ Holds, `t* > 10ε` ⇒ Fails, anything between is Inconclusive
//! (with `ε = 1e-7·scale` unless a certificate overrides it).

mod engine;
mod stability;
mod norms;
mod kyp;
mod sectors;
mod gkyp;
mod zeros;
mod dstab;
mod riccati;
mod robust;
mod stabilization;

pub use dstab::{d_stability, DStabilityOptions, Region};
pub use gkyp::{gkyp_band, Band, BandProperty};
pub use kyp::{
    brl_as_qsr, interior_cone_supply, minimum_gain_supply, positive_real, qsr_dissipative,
    strictly_positive_real, PsdMode,
};
pub use norms::{
    generalized_h2_norm, h2_norm, hinf_norm, peak_to_peak_bound, GenH2Form, H2Form, HinfForm,
};
pub use riccati::riccati_feasible;
pub use robust::{dc_gain_bound, mu_scaling, robust_stability, RobustSpec, UncertaintySet};
pub use sectors::{conic_sector, exterior_cone, minimum_gain, negative_imaginary, ConicForm};
pub use stability::{stability, stability_all_variants, StabilityVariant};
pub use stabilization::{
    sof_stabilize, stabilizability, strong_stabilize, SofOptions, StabilizabilityMode,
};
pub use zeros::transmission_zeros;

pub(crate) use engine::{CertBuilder, MinimizeOutcome};

use crate::matcore::{DenseMatrix, SymmetricMatrix};
use serde::Serialize;

/// Certificate verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Result of one certificate computation.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Certified scalar for norm-type certificates (γ, μ, ν, …).
    pub value: Option<f64>,
    /// Named witness assignments (P, Q, Z, V, …).
    pub witnesses: Vec<(String, DenseMatrix)>,
    /// Which of the equivalent LMI variants produced this certificate.
    pub form_used: String,
    /// Max constraint violation of the witness under the property LMIs
    /// (largest eigenvalue over the replayed `⪯ 0` blocks).
    pub residual: f64,
    /// The feasibility margin `t*` where the verdict came from one.
    pub margin: Option<f64>,
    /// Human-readable notes (preconditions checked, grid data, …).
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn witness(&self, name: &str) -> Option<&DenseMatrix> {
        self.witnesses.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

/// Quadratic supply rate `yᵀQy + 2yᵀSu + uᵀRu`.
#[derive(Clone, Debug)]
pub struct SupplyRate {
    pub q: SymmetricMatrix,
    pub s: DenseMatrix,
    pub r: SymmetricMatrix,
}

impl SupplyRate {
    pub fn new(q: SymmetricMatrix, s: DenseMatrix, r: SymmetricMatrix) -> crate::Result<Self> {
        if s.rows() != q.dim() || s.cols() != r.dim() {
            return Err(crate::Error::DimensionMismatch("supply rate S must be p×m".into()));
        }
        Ok(Self { q, s, r })
    }
}

/// LMI region `{z : Λ + zΦ + z̄Φᵀ ≺ 0}`.
#[derive(Clone, Debug)]
pub struct LmiRegion {
    pub lambda: SymmetricMatrix,
    pub phi: DenseMatrix,
}

impl LmiRegion {
    pub fn new(lambda: SymmetricMatrix, phi: DenseMatrix) -> crate::Result<Self> {
        if phi.rows() != lambda.dim() || phi.cols() != lambda.dim() {
            return Err(crate::Error::DimensionMismatch("region Φ shape".into()));
        }
        Ok(Self { lambda, phi })
    }

    /// Evaluate `f_D(z)` at a complex point; Hermitian by construction,
    /// returned through its real embedding's minimum eigenvalue sign.
    pub fn contains(&self, z: (f64, f64)) -> crate::Result<bool> {
        // f(z) = Λ + zΦ + z̄Φᵀ: real part Λ + x(Φ+Φᵀ), imaginary y(Φ−Φᵀ)
        let (x, y) = z;
        let re = &(self.lambda.as_mat() + &(&self.phi + &self.phi.transpose()).scale(x));
        let im = (&self.phi - &self.phi.transpose()).scale(y);
        let emb = crate::lmimodel::real_embedding(&SymmetricMatrix::symmetrize(re), &im)?;
        Ok(emb.max_eig()? < 0.0)
    }
}
