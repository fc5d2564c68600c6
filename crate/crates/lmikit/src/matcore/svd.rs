//! One-sided Jacobi SVD. Accurate for small singular values, which matters
//! because all rank decisions funnel through it.

use super::{rank_threshold, DenseMatrix};
use crate::{Error, Result};

/// Thin singular value decomposition `A = U diag(s) Vᵀ`.
///
/// `u` is `m×k`, `v` is `n×k` with `k = min(m, n)`; singular values are in
/// descending order. When `A` is wide (`m < n`), `v` here is still `n×k`;
/// use [`nullspace_basis`] for a full orthonormal nullspace.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

const SVD_MAX_SWEEPS: usize = 64;

/// One-sided Jacobi on the tall orientation.
fn one_sided_jacobi(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix)> {
    // a: m×n with m >= n. Returns (U m×n, s, V n×n).
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    let eps = 1e-15;

    for _sweep in 0..SVD_MAX_SWEEPS {
        let mut converged = true;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() + 1e-300 {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = {
                    let sgn = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.set(i, p, c * wp - s * wq);
                    w.set(i, q, s * wp + c * wq);
                }
                for i in 0..n {
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        if converged {
            // extract singular values and U
            let mut sv: Vec<(f64, usize)> =
                (0..n).map(|j| ((0..m).map(|i| w.get(i, j).powi(2)).sum::<f64>().sqrt(), j)).collect();
            sv.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
            let mut u = DenseMatrix::zeros(m, n);
            let mut vs = DenseMatrix::zeros(n, n);
            let mut s = Vec::with_capacity(n);
            for (new_j, &(sig, old_j)) in sv.iter().enumerate() {
                s.push(sig);
                if sig > 0.0 {
                    for i in 0..m {
                        u.set(i, new_j, w.get(i, old_j) / sig);
                    }
                }
                for i in 0..n {
                    vs.set(i, new_j, v.get(i, old_j));
                }
            }
            return Ok((u, s, vs));
        }
    }
    Err(Error::EigenFailure(SVD_MAX_SWEEPS))
}

/// Thin SVD of an arbitrary real matrix.
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NonFinite("svd input".into()));
    }
    let m = a.rows();
    let n = a.cols();
    if m == 0 || n == 0 {
        return Ok(Svd { u: DenseMatrix::zeros(m, 0), s: vec![], v: DenseMatrix::zeros(n, 0) });
    }
    if m >= n {
        let (u, s, v) = one_sided_jacobi(a)?;
        Ok(Svd { u, s, v })
    } else {
        let (u, s, v) = one_sided_jacobi(&a.transpose())?;
        Ok(Svd { u: v, s, v: u })
    }
}

/// Numerical rank with the shared threshold `σ ≤ 1e-10·σ_max·max(rows,cols)`.
pub fn rank(a: &DenseMatrix) -> Result<usize> {
    let f = svd(a)?;
    let smax = f.s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    let tol = rank_threshold(smax, a.rows(), a.cols());
    Ok(f.s.iter().filter(|&&s| s > tol).count())
}

/// Orthonormal basis of the right nullspace: `M N ≈ 0`, `NᵀN = I`,
/// with `cols(N) = cols(M) − rank(M)`. Full-rank input yields a 0-column
/// matrix; a zero (or zero-row) input yields the identity.
pub fn nullspace_basis(m: &DenseMatrix) -> Result<DenseMatrix> {
    let ncols = m.cols();
    if ncols == 0 {
        return Ok(DenseMatrix::zeros(0, 0));
    }
    if m.rows() == 0 {
        return Ok(DenseMatrix::identity(ncols));
    }
    let f = svd(m)?;
    let smax = f.s.first().copied().unwrap_or(0.0);
    let tol = if smax == 0.0 { 0.0 } else { rank_threshold(smax, m.rows(), m.cols()) };
    let r = f.s.iter().filter(|&&s| s > tol).count();
    let null_dim = ncols - r;
    if null_dim == 0 {
        return Ok(DenseMatrix::zeros(ncols, 0));
    }
    // Range basis of Mᵀ: the first r columns of V.
    let range: Vec<Vec<f64>> = (0..r).map(|j| f.v.column_vec(j)).collect();
    // Complete to a full orthonormal basis with modified Gram-Schmidt over
    // canonical candidates; the complement spans the nullspace.
    let mut basis: Vec<Vec<f64>> = range;
    let mut null_cols: Vec<Vec<f64>> = Vec::with_capacity(null_dim);
    let mut cand = 0usize;
    while null_cols.len() < null_dim && cand < ncols {
        let mut vcol = vec![0.0; ncols];
        vcol[cand] = 1.0;
        cand += 1;
        for _pass in 0..2 {
            for b in &basis {
                let dot: f64 = vcol.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in vcol.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
        }
        let nrm: f64 = vcol.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-7 {
            for x in vcol.iter_mut() {
                *x /= nrm;
            }
            basis.push(vcol.clone());
            null_cols.push(vcol);
        }
    }
    if null_cols.len() != null_dim {
        return Err(Error::SolverFailure("nullspace basis completion failed".into()));
    }
    let mut out = DenseMatrix::zeros(ncols, null_dim);
    for (j, col) in null_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            out.set(i, j, x);
        }
    }
    Ok(out)
}

/// Moore–Penrose pseudoinverse via the SVD and the shared rank threshold.
pub fn pinv(a: &DenseMatrix) -> Result<DenseMatrix> {
    let f = svd(a)?;
    let smax = f.s.first().copied().unwrap_or(0.0);
    let tol = if smax == 0.0 { f64::INFINITY } else { rank_threshold(smax, a.rows(), a.cols()) };
    let k = f.s.len();
    let mut sp = DenseMatrix::zeros(k, k);
    for (i, &s) in f.s.iter().enumerate() {
        if s > tol {
            sp.set(i, i, 1.0 / s);
        }
    }
    Ok(&(&f.v * &sp) * &f.u.transpose())
}

/// Largest singular value.
pub fn sigma_max(a: &DenseMatrix) -> Result<f64> {
    Ok(svd(a)?.s.first().copied().unwrap_or(0.0))
}

/// Smallest singular value (of min(m,n) values).
pub fn sigma_min(a: &DenseMatrix) -> Result<f64> {
    Ok(svd(a)?.s.last().copied().unwrap_or(0.0))
}
