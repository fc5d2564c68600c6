//! State-space and generalized-plant data model, interconnections, and the
//! servo-loop plant builders.

mod connect;
mod freq;
mod servo;
mod validate;

pub use connect::{close_dynamic_output_feedback, close_static_output_feedback, observer_error_dynamics};
pub use freq::{transfer_eval, ComplexMatrix};
pub use servo::{build_servo_plant, ServoWeights};
pub use validate::{validate, SystemReport};

use crate::matcore::{DenseMatrix, Domain};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

fn check_finite(name: &str, m: &DenseMatrix) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{name} entries")))
    }
}

/// LTI state-space realization `(A, B, C, D)` with a CT/DT tag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateSpace {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    pub d: DenseMatrix,
    pub domain: Domain,
}

impl StateSpace {
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix, d: DenseMatrix, domain: Domain) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch("A must be square".into()));
        }
        if b.rows() != n {
            return Err(Error::DimensionMismatch("B row count must match A".into()));
        }
        if c.cols() != n {
            return Err(Error::DimensionMismatch("C column count must match A".into()));
        }
        if d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(Error::DimensionMismatch("D must be p×m".into()));
        }
        for (name, m) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            check_finite(name, m)?;
        }
        Ok(Self { a, b, c, d, domain })
    }

    /// Scalar shorthand used all over the tests.
    pub fn siso(a: f64, b: f64, c: f64, d: f64, domain: Domain) -> Self {
        Self::new(
            DenseMatrix::scalar(a),
            DenseMatrix::scalar(b),
            DenseMatrix::scalar(c),
            DenseMatrix::scalar(d),
            domain,
        )
        .expect("scalar system")
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn outputs(&self) -> usize {
        self.c.rows()
    }

    pub fn is_square(&self) -> bool {
        self.inputs() == self.outputs()
    }

    /// Transposed (dual) system `(Aᵀ, Cᵀ, Bᵀ, Dᵀ)`.
    pub fn dual(&self) -> Self {
        Self {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
            domain: self.domain,
        }
    }
}

/// Partition dimensions of a generalized plant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantDims {
    pub n_x: usize,
    pub n_w: usize,
    pub n_u: usize,
    pub n_z: usize,
    pub n_y: usize,
}

/// Generalized LTI plant with performance channel `w → z` and control
/// channel `u → y`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralizedPlant {
    pub a: DenseMatrix,
    pub b1: DenseMatrix,
    pub b2: DenseMatrix,
    pub c1: DenseMatrix,
    pub c2: DenseMatrix,
    pub d11: DenseMatrix,
    pub d12: DenseMatrix,
    pub d21: DenseMatrix,
    pub d22: DenseMatrix,
    pub domain: Domain,
}

impl GeneralizedPlant {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: DenseMatrix,
        b1: DenseMatrix,
        b2: DenseMatrix,
        c1: DenseMatrix,
        c2: DenseMatrix,
        d11: DenseMatrix,
        d12: DenseMatrix,
        d21: DenseMatrix,
        d22: DenseMatrix,
        domain: Domain,
    ) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch("A must be square".into()));
        }
        let (n_w, n_u) = (b1.cols(), b2.cols());
        let (n_z, n_y) = (c1.rows(), c2.rows());
        let dims_ok = b1.rows() == n
            && b2.rows() == n
            && c1.cols() == n
            && c2.cols() == n
            && d11.rows() == n_z
            && d11.cols() == n_w
            && d12.rows() == n_z
            && d12.cols() == n_u
            && d21.rows() == n_y
            && d21.cols() == n_w
            && d22.rows() == n_y
            && d22.cols() == n_u;
        if !dims_ok {
            return Err(Error::DimensionMismatch("generalized plant partitions".into()));
        }
        for (name, m) in [
            ("A", &a),
            ("B1", &b1),
            ("B2", &b2),
            ("C1", &c1),
            ("C2", &c2),
            ("D11", &d11),
            ("D12", &d12),
            ("D21", &d21),
            ("D22", &d22),
        ] {
            check_finite(name, m)?;
        }
        Ok(Self { a, b1, b2, c1, c2, d11, d12, d21, d22, domain })
    }

    pub fn dims(&self) -> PlantDims {
        PlantDims {
            n_x: self.a.rows(),
            n_w: self.b1.cols(),
            n_u: self.b2.cols(),
            n_z: self.c1.rows(),
            n_y: self.c2.rows(),
        }
    }

    /// The open-loop performance channel `(A, B₁, C₁, D₁₁)`.
    pub fn performance_channel(&self) -> StateSpace {
        StateSpace {
            a: self.a.clone(),
            b: self.b1.clone(),
            c: self.c1.clone(),
            d: self.d11.clone(),
            domain: self.domain,
        }
    }

    /// Bundle the full plant as one state-space map `(w,u) → (z,y)`.
    pub fn as_state_space(&self) -> StateSpace {
        StateSpace {
            a: self.a.clone(),
            b: DenseMatrix::hstack(&[&self.b1, &self.b2]),
            c: DenseMatrix::vstack(&[&self.c1, &self.c2]),
            d: DenseMatrix::block(&[
                vec![&self.d11, &self.d12],
                vec![&self.d21, &self.d22],
            ]),
            domain: self.domain,
        }
    }
}

/// Dynamic controller realization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Controller {
    pub ac: DenseMatrix,
    pub bc: DenseMatrix,
    pub cc: DenseMatrix,
    pub dc: DenseMatrix,
    pub domain: Domain,
}

impl Controller {
    pub fn new(ac: DenseMatrix, bc: DenseMatrix, cc: DenseMatrix, dc: DenseMatrix, domain: Domain) -> Result<Self> {
        if !ac.is_square() {
            return Err(Error::DimensionMismatch("controller Ac must be square".into()));
        }
        if bc.rows() != ac.rows() || cc.cols() != ac.cols() {
            return Err(Error::DimensionMismatch("controller partitions".into()));
        }
        if dc.rows() != cc.rows() || dc.cols() != bc.cols() {
            return Err(Error::DimensionMismatch("controller Dc".into()));
        }
        Ok(Self { ac, bc, cc, dc, domain })
    }

    /// Static gain as a zero-order controller.
    pub fn static_gain(k: DenseMatrix, domain: Domain) -> Self {
        let (m, p) = (k.rows(), k.cols());
        Self {
            ac: DenseMatrix::zeros(0, 0),
            bc: DenseMatrix::zeros(0, p),
            cc: DenseMatrix::zeros(m, 0),
            dc: k,
            domain,
        }
    }

    pub fn order(&self) -> usize {
        self.ac.rows()
    }

    pub fn as_state_space(&self) -> StateSpace {
        StateSpace {
            a: self.ac.clone(),
            b: self.bc.clone(),
            c: self.cc.clone(),
            d: self.dc.clone(),
            domain: self.domain,
        }
    }
}
