//! Real embedding of Hermitian data and the two quadratic-inequality
//! conversions (weighted norm, affine-quadratic constraint).

use super::{AffineExpr, BlockEntry, VarRef};
use crate::matcore::{cholesky, inverse, DenseMatrix, SymmetricMatrix};
use crate::{Error, Result};

/// Real 2n×2n embedding of a Hermitian matrix `H = H_re + j·H_im`:
/// `[[H_re, H_im], [−H_im, H_re]]`. Definiteness verdicts of the source and
/// the embedding agree (each eigenvalue shows up twice).
pub fn real_embedding(h_re: &SymmetricMatrix, h_im: &DenseMatrix) -> Result<SymmetricMatrix> {
    let n = h_re.dim();
    if h_im.rows() != n || h_im.cols() != n {
        return Err(Error::DimensionMismatch("real embedding imaginary part".into()));
    }
    let skew_dev = (h_im + &h_im.transpose()).frob_norm();
    if skew_dev > 1e-9 * h_im.frob_norm().max(1.0) {
        return Err(Error::NotSymmetric { max_deviation: skew_dev, tolerance: 1e-9 })?;
    }
    let top = DenseMatrix::hstack(&[h_re.as_mat(), h_im]);
    let bot = DenseMatrix::hstack(&[&h_im.scale(-1.0), h_re.as_mat()]);
    SymmetricMatrix::new(DenseMatrix::vstack(&[&top, &bot]))
}

/// Expression-level Hermitian embedding: given affine `E_re` (symmetric
/// valued) and `E_im` (skew valued), build `[[E_re, E_im], [−E_im, E_re]]`.
pub fn real_embedding_expr(e_re: &AffineExpr, e_im: &AffineExpr) -> Result<AffineExpr> {
    AffineExpr::block(&[
        vec![BlockEntry::E(e_re.clone()), BlockEntry::E(e_im.clone())],
        vec![BlockEntry::E(e_im.neg()), BlockEntry::E(e_re.clone())],
    ])
}

/// The γ argument of the weighted-norm conversion: a number or a declared
/// scalar variable.
#[derive(Clone, Copy, Debug)]
pub enum GammaArg {
    Const(f64),
    Var(VarRef),
}

/// Which quadratic inequality to convert.
pub enum QuadraticLmi<'a> {
    /// `(x−y)ᵀ W (x−y) ≤ γ`  ⇔  `[[γ, (x−y)ᵀ], [∗, W⁻¹]] ⪰ 0`.
    WeightedNorm { w: &'a SymmetricMatrix, x: &'a [f64], y: &'a [f64], gamma: GammaArg },
    /// `(Ax+b)ᵀ W (Ax+b) ≤ cᵀx + d`  ⇔  `[[W⁻¹, Ax+b], [∗, cᵀx+d]] ⪰ 0`,
    /// with `x` a column-vector decision variable.
    QuadraticIneq {
        w: &'a SymmetricMatrix,
        a: &'a DenseMatrix,
        b: &'a [f64],
        c: &'a [f64],
        d: f64,
        x: VarRef,
    },
}

/// Build the LMI expression (in the `⪰ 0` orientation) equivalent to the
/// requested scalar quadratic inequality. Requires `W ≻ 0`.
pub fn quadratic_to_lmi(kind: QuadraticLmi<'_>) -> Result<AffineExpr> {
    match kind {
        QuadraticLmi::WeightedNorm { w, x, y, gamma } => {
            if x.len() != w.dim() || y.len() != w.dim() {
                return Err(Error::DimensionMismatch("weighted norm vectors".into()));
            }
            if cholesky(w.as_mat()).is_none() {
                return Err(Error::NotPositiveDefinite("weight W".into()));
            }
            let winv = inverse(w.as_mat())?;
            let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            let dcol = DenseMatrix::column(&diff);
            let g_expr = match gamma {
                GammaArg::Const(g) => AffineExpr::constant(DenseMatrix::scalar(g)),
                GammaArg::Var(v) => AffineExpr::var(v),
            };
            AffineExpr::block(&[
                vec![BlockEntry::E(g_expr), BlockEntry::E(AffineExpr::constant(dcol.transpose()))],
                vec![BlockEntry::Mirror, BlockEntry::E(AffineExpr::constant(winv))],
            ])
        }
        QuadraticLmi::QuadraticIneq { w, a, b, c, d, x } => {
            let n = w.dim();
            if a.rows() != n || b.len() != n {
                return Err(Error::DimensionMismatch("quadratic inequality data".into()));
            }
            let (xr, xc) = x.kind().shape();
            if xc != 1 || a.cols() != xr || c.len() != xr {
                return Err(Error::DimensionMismatch("decision vector shape".into()));
            }
            if cholesky(w.as_mat()).is_none() {
                return Err(Error::NotPositiveDefinite("weight W".into()));
            }
            let winv = inverse(w.as_mat())?;
            let ax_b = &AffineExpr::var(x).lmul(a) + &AffineExpr::constant(DenseMatrix::column(b));
            let ctx_d = &AffineExpr::var(x).lmul(&DenseMatrix::row(c))
                + &AffineExpr::constant(DenseMatrix::scalar(d));
            AffineExpr::block(&[
                vec![BlockEntry::E(AffineExpr::constant(winv)), BlockEntry::E(ax_b)],
                vec![BlockEntry::Mirror, BlockEntry::E(ctx_d)],
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::symeig;

    #[test]
    fn embedding_of_real_hermitian_is_block_diag() {
        let h = SymmetricMatrix::new(DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]])).unwrap();
        let z = DenseMatrix::zeros(2, 2);
        let e = real_embedding(&h, &z).unwrap();
        assert_eq!(e.as_mat().submatrix(0, 0, 2, 2), h.as_mat().clone());
        assert_eq!(e.as_mat().submatrix(2, 2, 2, 2), h.as_mat().clone());
        assert_eq!(e.as_mat().submatrix(0, 2, 2, 2), z);
    }

    #[test]
    fn scalar_identity_embedding() {
        let h = SymmetricMatrix::identity(1);
        let e = real_embedding(&h, &DenseMatrix::zeros(1, 1)).unwrap();
        assert!((e.as_mat() - &DenseMatrix::identity(2)).frob_norm() < 1e-15);
    }

    #[test]
    fn embedding_doubles_spectrum() {
        // random 3x3 Hermitian: eigenvalues of the embedding are the source
        // eigenvalues with doubled multiplicity
        let h_re = SymmetricMatrix::new(DenseMatrix::from_rows(&[
            vec![1.0, 0.3, -0.2],
            vec![0.3, 2.0, 0.5],
            vec![-0.2, 0.5, -1.0],
        ]))
        .unwrap();
        let h_im = DenseMatrix::from_rows(&[
            vec![0.0, 0.4, -0.1],
            vec![-0.4, 0.0, 0.2],
            vec![0.1, -0.2, 0.0],
        ]);
        let e = real_embedding(&h_re, &h_im).unwrap();
        let (vals, _) = symeig(&e).unwrap();
        // pairs: vals[0] ≈ vals[1], vals[2] ≈ vals[3], vals[4] ≈ vals[5]
        for k in 0..3 {
            assert!((vals[2 * k] - vals[2 * k + 1]).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_skew_imaginary_part() {
        let h = SymmetricMatrix::identity(2);
        let not_skew = DenseMatrix::identity(2);
        assert!(real_embedding(&h, &not_skew).is_err());
    }

    #[test]
    fn weighted_norm_boundary_case() {
        // W = I, x - y = (1, 0), γ = 1: block matrix [[1,1,0],[1,1,0],[0,0,1]] is PSD with a zero eigenvalue
        let w = SymmetricMatrix::identity(2);
        let x = [1.0, 0.0];
        let y = [0.0, 0.0];
        let e = quadratic_to_lmi(QuadraticLmi::WeightedNorm {
            w: &w,
            x: &x,
            y: &y,
            gamma: GammaArg::Const(1.0),
        })
        .unwrap();
        let val = e.eval(&super::super::Assignment::default()).unwrap();
        let s = SymmetricMatrix::symmetrize(&val);
        let (vals, _) = symeig(&s).unwrap();
        assert!(vals[0] > -1e-12 && vals[0] < 1e-12); // boundary feasible
    }

    #[test]
    fn weighted_norm_zero_residual_any_gamma() {
        let w = SymmetricMatrix::identity(2);
        let x = [0.3, -0.7];
        let e = quadratic_to_lmi(QuadraticLmi::WeightedNorm {
            w: &w,
            x: &x,
            y: &x,
            gamma: GammaArg::Const(0.0),
        })
        .unwrap();
        let val = e.eval(&super::super::Assignment::default()).unwrap();
        let s = SymmetricMatrix::symmetrize(&val);
        assert!(s.min_eig().unwrap() >= -1e-12);
    }
}
