//! Frequency evaluation of transfer matrices. Complex arithmetic is realized
//! through the real 2n-dimensional embedding; no complex matrix type leaks
//! into the public data model.

use super::StateSpace;
use crate::matcore::{solve, DenseMatrix};
use crate::{Error, Result};

/// Complex matrix as a real/imaginary pair.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    pub re: DenseMatrix,
    pub im: DenseMatrix,
}

impl ComplexMatrix {
    pub fn from_real(re: DenseMatrix) -> Self {
        let im = DenseMatrix::zeros(re.rows(), re.cols());
        Self { re, im }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real(DenseMatrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    pub fn conj_transpose(&self) -> Self {
        Self { re: self.re.transpose(), im: self.im.transpose().scale(-1.0) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self {
            re: self.re.submatrix(r0, c0, rows, cols),
            im: self.im.submatrix(r0, c0, rows, cols),
        }
    }

    pub fn frob_norm(&self) -> f64 {
        (self.re.frob_norm().powi(2) + self.im.frob_norm().powi(2)).sqrt()
    }

    /// Complex inverse via the real 2n embedding.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.re.rows();
        if self.re.cols() != n {
            return Err(Error::DimensionMismatch("complex inverse of non-square".into()));
        }
        let top = DenseMatrix::hstack(&[&self.re, &self.im.scale(-1.0)]);
        let bot = DenseMatrix::hstack(&[&self.im, &self.re]);
        let emb = DenseMatrix::vstack(&[&top, &bot]);
        let rhs = DenseMatrix::vstack(&[&DenseMatrix::identity(n), &DenseMatrix::zeros(n, n)]);
        let sol = solve(&emb, &rhs).map_err(|_| Error::Singular("complex matrix".into()))?;
        Ok(Self { re: sol.submatrix(0, 0, n, n), im: sol.submatrix(n, 0, n, n) })
    }

    /// Hermitian part `(M + Mᴴ)/2`.
    pub fn hermitian_part(&self) -> Self {
        let ct = self.conj_transpose();
        Self { re: (&self.re + &ct.re).scale(0.5), im: (&self.im + &ct.im).scale(0.5) }
    }

    /// Largest singular value, via the real embedding (each singular value
    /// appears twice in the embedding).
    pub fn sigma_max(&self) -> Result<f64> {
        let top = DenseMatrix::hstack(&[&self.re, &self.im.scale(-1.0)]);
        let bot = DenseMatrix::hstack(&[&self.im, &self.re]);
        let emb = DenseMatrix::vstack(&[&top, &bot]);
        crate::matcore::sigma_max(&emb)
    }

    /// Smallest singular value via the real embedding.
    pub fn sigma_min(&self) -> Result<f64> {
        let top = DenseMatrix::hstack(&[&self.re, &self.im.scale(-1.0)]);
        let bot = DenseMatrix::hstack(&[&self.im, &self.re]);
        let emb = DenseMatrix::vstack(&[&top, &bot]);
        crate::matcore::sigma_min(&emb)
    }

    /// Smallest eigenvalue of a Hermitian complex matrix (real/imag parts
    /// symmetric/skew), through the 2n real embedding.
    pub fn min_eig_hermitian(&self) -> Result<f64> {
        let h = crate::lmimodel::real_embedding(
            &crate::matcore::SymmetricMatrix::symmetrize(&self.re),
            &self.im.skew_part(),
        )?;
        h.min_eig()
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

/// Evaluate `G(s₀) = C(s₀I − A)⁻¹B + D` at the complex point `s₀ = (re, im)`
/// via one linear solve in the 2n real embedding (no explicit inverse).
pub fn transfer_eval(sys: &StateSpace, point: (f64, f64)) -> Result<ComplexMatrix> {
    let n = sys.order();
    let (sr, si) = point;
    if n == 0 {
        return Ok(ComplexMatrix::from_real(sys.d.clone()));
    }
    // (sI − A) = M_re + j·M_im with M_re = sr·I − A, M_im = si·I
    let m_re = &DenseMatrix::scaled_identity(n, sr) - &sys.a;
    let m_im = DenseMatrix::scaled_identity(n, si);
    let top = DenseMatrix::hstack(&[&m_re, &m_im.scale(-1.0)]);
    let bot = DenseMatrix::hstack(&[&m_im, &m_re]);
    let emb = DenseMatrix::vstack(&[&top, &bot]);
    let rhs = DenseMatrix::vstack(&[&sys.b, &DenseMatrix::zeros(n, sys.inputs())]);
    let x = solve(&emb, &rhs).map_err(|_| {
        Error::PoleEvaluation(format!("s = {sr} + {si}j is (near) an eigenvalue of A"))
    })?;
    let x_re = x.submatrix(0, 0, n, sys.inputs());
    let x_im = x.submatrix(n, 0, n, sys.inputs());
    Ok(ComplexMatrix { re: &(&sys.c * &x_re) + &sys.d, im: &sys.c * &x_im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::Domain;

    #[test]
    fn first_order_lag_dc_gain() {
        let sys = StateSpace::siso(-1.0, 1.0, 1.0, 0.0, Domain::Ct);
        let g = transfer_eval(&sys, (0.0, 0.0)).unwrap();
        assert!((g.re.get(0, 0) - 1.0).abs() < 1e-14);
        assert!(g.im.get(0, 0).abs() < 1e-14);
    }

    #[test]
    fn feedthrough_only_when_b_zero() {
        let sys = StateSpace::new(
            DenseMatrix::scalar(-2.0),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::scalar(1.0),
            DenseMatrix::scalar(0.7),
            Domain::Ct,
        )
        .unwrap();
        let g = transfer_eval(&sys, (0.0, 3.3)).unwrap();
        assert!((g.re.get(0, 0) - 0.7).abs() < 1e-14);
        assert!(g.im.get(0, 0).abs() < 1e-14);
    }

    #[test]
    fn pole_evaluation_rejected() {
        let sys = StateSpace::siso(-1.0, 1.0, 1.0, 0.0, Domain::Ct);
        assert!(matches!(transfer_eval(&sys, (-1.0, 0.0)), Err(Error::PoleEvaluation(_))));
    }

    #[test]
    fn two_by_two_adjugate_cross_check() {
        // closed form for n=2: (sI−A)⁻¹ = adj(sI−A)/det(sI−A)
        let a = DenseMatrix::from_rows(&[vec![-1.0, 2.0], vec![0.5, -3.0]]);
        let b = DenseMatrix::from_rows(&[vec![1.0], vec![-1.0]]);
        let c = DenseMatrix::from_rows(&[vec![0.3, 0.9]]);
        let d = DenseMatrix::scalar(0.1);
        let sys = StateSpace::new(a.clone(), b.clone(), c.clone(), d.clone(), Domain::Ct).unwrap();
        let s = (0.4, 1.7);
        let g = transfer_eval(&sys, s).unwrap();
        // adjugate route in complex scalar arithmetic
        let m = |r: usize, cc: usize| -> (f64, f64) {
            let re = if r == cc { s.0 } else { 0.0 } - a.get(r, cc);
            let im = if r == cc { s.1 } else { 0.0 };
            (re, im)
        };
        let (m00, m01, m10, m11) = (m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        let cmul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let csub = |x: (f64, f64), y: (f64, f64)| (x.0 - y.0, x.1 - y.1);
        let det = csub(cmul(m00, m11), cmul(m01, m10));
        let cdiv = |x: (f64, f64), y: (f64, f64)| {
            let q = y.0 * y.0 + y.1 * y.1;
            ((x.0 * y.0 + x.1 * y.1) / q, (x.1 * y.0 - x.0 * y.1) / q)
        };
        // inv = adj/det; x = inv*b
        let adj = [[m11, (-m01.0, -m01.1)], [(-m10.0, -m10.1), m00]];
        let bx = [b.get(0, 0), b.get(1, 0)];
        let mut x = [(0.0, 0.0); 2];
        for r in 0..2 {
            let mut acc = (0.0, 0.0);
            for k in 0..2 {
                let t = cmul(adj[r][k], (bx[k], 0.0));
                acc = (acc.0 + t.0, acc.1 + t.1);
            }
            x[r] = cdiv(acc, det);
        }
        let mut gval = (d.get(0, 0), 0.0);
        for k in 0..2 {
            let t = cmul((c.get(0, k), 0.0), x[k]);
            gval = (gval.0 + t.0, gval.1 + t.1);
        }
        assert!((g.re.get(0, 0) - gval.0).abs() < 1e-12);
        assert!((g.im.get(0, 0) - gval.1).abs() < 1e-12);
    }
}
