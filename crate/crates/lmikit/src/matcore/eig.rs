//! Eigensolvers: cyclic Jacobi for symmetric matrices, balanced
//! Hessenberg-QR (Francis double shift) for general real matrices.

use super::{DenseMatrix, SymmetricMatrix};
use crate::{Error, Result};

/// Plain complex scalar; only what eigenvalue bookkeeping needs.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the orthogonal matrix of
/// eigenvectors (column `i` pairs with eigenvalue `i`), so `S = V Λ Vᵀ`.
pub fn symeig(s: &SymmetricMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = s.dim();
    if n == 0 {
        return Ok((vec![], DenseMatrix::zeros(0, 0)));
    }
    let mut a = s.as_mat().clone();
    if !a.is_finite() {
        return Err(Error::NonFinite("symeig input".into()));
    }
    let mut v = DenseMatrix::identity(n);
    let scale = a.frob_norm().max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).abs();
            }
        }
        if off <= tol {
            let mut vals: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i), i)).collect();
            vals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            let eigvals: Vec<f64> = vals.iter().map(|x| x.0).collect();
            let mut vecs = DenseMatrix::zeros(n, n);
            for (new_c, &(_, old_c)) in vals.iter().enumerate() {
                for r in 0..n {
                    vecs.set(r, new_c, v.get(r, old_c));
                }
            }
            return Ok((eigvals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                // rows/cols p and q of A
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }
    Err(Error::EigenFailure(JACOBI_MAX_SWEEPS))
}

/// Diagonal balancing: scales `A ← D⁻¹ A D` with powers of two so that row
/// and column norms roughly match. Improves eigenvalue accuracy only.
fn balance(a: &mut DenseMatrix) {
    let n = a.rows();
    let radix = 2.0_f64;
    let mut done = false;
    let mut iters = 0;
    while !done && iters < 32 {
        done = true;
        iters += 1;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a.get(j, i).abs();
                    r += a.get(i, j).abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut cc = c;
            let s = c + r;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc > r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (c * f + r / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    a.set(i, j, a.get(i, j) / f);
                }
                for j in 0..n {
                    a.set(j, i, a.get(j, i) * f);
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form; optionally accumulates the
/// orthogonal similarity `Q` with `A = Q H Qᵀ`.
pub(super) fn hessenberg(a: &DenseMatrix, accumulate: bool) -> (DenseMatrix, Option<DenseMatrix>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = if accumulate { Some(DenseMatrix::identity(n)) } else { None };
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal
        let mut x: Vec<f64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha <= 1e-300 {
            continue;
        }
        let alpha = if x[0] >= 0.0 { -alpha } else { alpha };
        x[0] -= alpha;
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if norm2 <= 1e-300 {
            continue;
        }
        // H v = (I - 2 v vᵀ / vᵀv)
        // apply from the left to rows k+1.. of H
        for c in 0..n {
            let mut dot = 0.0;
            for (idx, i) in (k + 1..n).enumerate() {
                dot += x[idx] * h.get(i, c);
            }
            let f = 2.0 * dot / norm2;
            for (idx, i) in (k + 1..n).enumerate() {
                h.add_at(i, c, -f * x[idx]);
            }
        }
        // apply from the right to cols k+1..
        for r in 0..n {
            let mut dot = 0.0;
            for (idx, j) in (k + 1..n).enumerate() {
                dot += x[idx] * h.get(r, j);
            }
            let f = 2.0 * dot / norm2;
            for (idx, j) in (k + 1..n).enumerate() {
                h.add_at(r, j, -f * x[idx]);
            }
        }
        if let Some(qm) = q.as_mut() {
            for r in 0..n {
                let mut dot = 0.0;
                for (idx, j) in (k + 1..n).enumerate() {
                    dot += x[idx] * qm.get(r, j);
                }
                let f = 2.0 * dot / norm2;
                for (idx, j) in (k + 1..n).enumerate() {
                    qm.add_at(r, j, -f * x[idx]);
                }
            }
        }
        // clean exact zeros below the subdiagonal
        for i in (k + 2)..n {
            h.set(i, k, 0.0);
        }
    }
    (h, q)
}

/// Francis double-shift QR iteration on a Hessenberg matrix, reducing it to
/// real Schur (quasi-triangular) form. Accumulates `Q` when given.
pub(super) fn francis_qr(h: &mut DenseMatrix, mut q: Option<&mut DenseMatrix>) -> Result<()> {
    let n = h.rows();
    if n <= 1 {
        return Ok(());
    }
    let norm = h.frob_norm().max(1.0);
    let eps = f64::EPSILON;
    let mut hi = n - 1; // active block is 0..=hi
    let mut iter_since_deflate = 0usize;
    let max_total = 60 * n;
    let mut total = 0usize;

    while hi > 0 {
        total += 1;
        if total > max_total {
            return Err(Error::EigenFailure(max_total));
        }
        // deflate tiny subdiagonals
        let mut lo = hi;
        while lo > 0 {
            let s = h.get(lo - 1, lo - 1).abs() + h.get(lo, lo).abs();
            let s = if s == 0.0 { norm } else { s };
            if h.get(lo, lo - 1).abs() <= eps * s {
                h.set(lo, lo - 1, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter_since_deflate = 0;
            continue;
        }
        if lo + 1 == hi {
            // 2x2 block: deflate it as a unit (leave as-is; quasi-triangular)
            // but if it has real eigenvalues, rotate to upper-triangularize.
            split_real_2x2(h, q.as_deref_mut(), lo);
            hi = lo.saturating_sub(1);
            if lo == 0 {
                break;
            }
            iter_since_deflate = 0;
            continue;
        }

        iter_since_deflate += 1;
        // shift from trailing 2x2; exceptional shift occasionally
        let (mut trace, mut det);
        {
            let a = h.get(hi - 1, hi - 1);
            let b = h.get(hi - 1, hi);
            let c = h.get(hi, hi - 1);
            let d = h.get(hi, hi);
            trace = a + d;
            det = a * d - b * c;
        }
        if iter_since_deflate % 11 == 10 {
            let s = h.get(hi, hi - 1).abs() + h.get(hi - 1, hi - 2).abs();
            trace = 1.5 * s;
            det = s * s;
        }

        // first column of (H - s1)(H - s2) restricted to the leading 3 entries
        let h00 = h.get(lo, lo);
        let h10 = h.get(lo + 1, lo);
        let h01 = h.get(lo, lo + 1);
        let h11 = h.get(lo + 1, lo + 1);
        let h21 = h.get(lo + 2, lo + 1);
        let mut x = h00 * h00 + h01 * h10 - trace * h00 + det;
        let mut y = h10 * (h00 + h11 - trace);
        let mut z = h21 * h10;

        // bulge chase: 3-row reflectors for k in [lo, hi-2], final 2-row
        // reflector at k = hi-1 to annihilate the trailing bulge entry
        for k in lo..hi {
            let last = k == hi - 1;
            let nrows = if last { 2 } else { 3 };
            let rows = [k, k + 1, if last { k + 1 } else { k + 2 }];
            let vraw = if last { [x, y, 0.0] } else { [x, y, z] };
            let alpha = (vraw[0] * vraw[0] + vraw[1] * vraw[1] + vraw[2] * vraw[2]).sqrt();
            if alpha > 1e-300 {
                let alpha = if vraw[0] >= 0.0 { -alpha } else { alpha };
                let v = [vraw[0] - alpha, vraw[1], vraw[2]];
                let norm2: f64 = v.iter().map(|t| t * t).sum();
                if norm2 > 1e-300 {
                    // left multiply
                    let start_col = if k > lo { k - 1 } else { lo };
                    for c in start_col..n {
                        let mut dot = 0.0;
                        for i in 0..nrows {
                            dot += v[i] * h.get(rows[i], c);
                        }
                        let f = 2.0 * dot / norm2;
                        for i in 0..nrows {
                            h.add_at(rows[i], c, -f * v[i]);
                        }
                    }
                    // the reflector was built to annihilate the bulge column
                    if k > lo {
                        for i in 1..nrows {
                            h.set(rows[i], k - 1, 0.0);
                        }
                    }
                    // right multiply
                    let end_row = (k + 3).min(hi) + 1;
                    for r in 0..end_row.min(n) {
                        let mut dot = 0.0;
                        for i in 0..nrows {
                            dot += v[i] * h.get(r, rows[i]);
                        }
                        let f = 2.0 * dot / norm2;
                        for i in 0..nrows {
                            h.add_at(r, rows[i], -f * v[i]);
                        }
                    }
                    if let Some(qm) = q.as_deref_mut() {
                        for r in 0..n {
                            let mut dot = 0.0;
                            for i in 0..nrows {
                                dot += v[i] * qm.get(r, rows[i]);
                            }
                            let f = 2.0 * dot / norm2;
                            for i in 0..nrows {
                                qm.add_at(r, rows[i], -f * v[i]);
                            }
                        }
                    }
                }
            }
            if !last {
                x = h.get(k + 1, k);
                y = h.get(k + 2, k);
                z = if k + 3 <= hi { h.get(k + 3, k) } else { 0.0 };
            }
        }
        // clean roundoff below the Hessenberg structure in the active block
        for r in (lo + 2)..=hi {
            for c in lo..(r - 1) {
                h.set(r, c, 0.0);
            }
        }
    }
    // final pass: split any remaining 2x2 blocks with real eigenvalues
    let mut i = 0;
    while i + 1 < n {
        if h.get(i + 1, i) != 0.0 {
            split_real_2x2(h, q.as_deref_mut(), i);
            i += 2;
        } else {
            i += 1;
        }
    }
    Ok(())
}

/// If the 2x2 block at `(i, i)` has real eigenvalues, apply a Givens rotation
/// that upper-triangularizes it (standardizing the Schur form).
fn split_real_2x2(h: &mut DenseMatrix, q: Option<&mut DenseMatrix>, i: usize) {
    let n = h.rows();
    let a = h.get(i, i);
    let b = h.get(i, i + 1);
    let c = h.get(i + 1, i);
    let d = h.get(i + 1, i + 1);
    if c == 0.0 {
        return;
    }
    let disc = (a - d) * (a - d) + 4.0 * b * c;
    if disc < 0.0 {
        return; // genuine complex pair, keep the 2x2 block
    }
    let sq = disc.sqrt();
    // eigenvalue closer to d for stability
    let l1 = 0.5 * (a + d + sq);
    let l2 = 0.5 * (a + d - sq);
    let lam = if (l1 - d).abs() < (l2 - d).abs() { l1 } else { l2 };
    // rotation annihilating the subdiagonal: [c, d-lam] direction
    let (p, r) = (a - lam, c);
    let nrm = (p * p + r * r).sqrt();
    if nrm <= 1e-300 {
        return;
    }
    let cs = p / nrm;
    let sn = r / nrm;
    for col in 0..n {
        let t1 = h.get(i, col);
        let t2 = h.get(i + 1, col);
        h.set(i, col, cs * t1 + sn * t2);
        h.set(i + 1, col, -sn * t1 + cs * t2);
    }
    for row in 0..n {
        let t1 = h.get(row, i);
        let t2 = h.get(row, i + 1);
        h.set(row, i, cs * t1 + sn * t2);
        h.set(row, i + 1, -sn * t1 + cs * t2);
    }
    if let Some(qm) = q {
        for row in 0..qm.rows() {
            let t1 = qm.get(row, i);
            let t2 = qm.get(row, i + 1);
            qm.set(row, i, cs * t1 + sn * t2);
            qm.set(row, i + 1, -sn * t1 + cs * t2);
        }
    }
    h.set(i + 1, i, 0.0);
}

/// Read eigenvalues off a quasi-triangular (real Schur) matrix.
pub(super) fn quasi_triangular_eigenvalues(t: &DenseMatrix) -> Vec<Complex> {
    let n = t.rows();
    let mut vals = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t.get(i + 1, i) != 0.0 {
            let a = t.get(i, i);
            let b = t.get(i, i + 1);
            let c = t.get(i + 1, i);
            let d = t.get(i + 1, i + 1);
            let re = 0.5 * (a + d);
            let disc = (a - d) * (a - d) + 4.0 * b * c;
            if disc < 0.0 {
                let im = 0.5 * (-disc).sqrt();
                vals.push(Complex::new(re, im));
                vals.push(Complex::new(re, -im));
            } else {
                let sq = disc.sqrt();
                vals.push(Complex::new(re + 0.5 * sq, 0.0));
                vals.push(Complex::new(re - 0.5 * sq, 0.0));
            }
            i += 2;
        } else {
            vals.push(Complex::new(t.get(i, i), 0.0));
            i += 1;
        }
    }
    vals
}

/// Eigenvalues of a general real square matrix (balanced Hessenberg QR).
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of non-square matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("eigenvalue input".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut b = a.clone();
    balance(&mut b);
    let (mut h, _) = hessenberg(&b, false);
    francis_qr(&mut h, None)?;
    Ok(quasi_triangular_eigenvalues(&h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn symeig_diagonal() {
        let s = SymmetricMatrix::new(DenseMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        let (vals, _) = symeig(&s).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symeig_swap_matrix() {
        let s = SymmetricMatrix::new(DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        let (vals, _) = symeig(&s).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symeig_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let n = 6;
            let g = random_mat(&mut rng, n);
            let s = SymmetricMatrix::symmetrize(&g);
            let (vals, v) = symeig(&s).unwrap();
            let lam = DenseMatrix::diag(&vals);
            let rec = &(&v * &lam) * &v.transpose();
            let scale = s.as_mat().frob_norm().max(1.0);
            assert!((&rec - s.as_mat()).frob_norm() <= 1e-10 * n as f64 * scale);
            let orth = &v.transpose() * &v;
            assert!((&orth - &DenseMatrix::identity(n)).frob_norm() <= 1e-10 * n as f64);
        }
    }

    #[test]
    fn definiteness_classification_matches_quadratic_form() {
        // min/max eigenvalue sign classifies xᵀAx sign on random probes
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_mat(&mut rng, 5);
        let base = SymmetricMatrix::symmetrize(&(&(&g * &g.transpose()) + &DenseMatrix::scaled_identity(5, 0.1)));
        let (vals, _) = symeig(&base).unwrap();
        assert!(vals[0] > 0.0);
        for _ in 0..100 {
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nrm: f64 = x.iter().map(|v| v * v).sum();
            if nrm < 1e-6 {
                continue;
            }
            let ax = base.as_mat().matvec(&x);
            let quad: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            assert!(quad > 0.0);
        }
    }

    #[test]
    fn quadratic_form_of_skew_matrix_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_mat(&mut rng, 6);
        let skew = g.skew_part();
        for _ in 0..100 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ax = skew.matvec(&x);
            let quad: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            assert!(quad.abs() <= 1e-12 * skew.frob_norm().max(1.0));
        }
    }

    #[test]
    fn quadratic_form_uses_symmetric_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_mat(&mut rng, 5);
        let s = a.sym_part();
        for _ in 0..50 {
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let qa: f64 = x.iter().zip(&a.matvec(&x)).map(|(u, v)| u * v).sum();
            let qs: f64 = x.iter().zip(&s.matvec(&x)).map(|(u, v)| u * v).sum();
            assert!((qa - qs).abs() < 1e-12);
        }
    }

    #[test]
    fn general_eigenvalues_companion() {
        // s^2 + 3s + 2 has roots -1, -2
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let mut vals = eigenvalues(&a).unwrap();
        vals.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert!((vals[0].re + 2.0).abs() < 1e-10 && vals[0].im.abs() < 1e-10);
        assert!((vals[1].re + 1.0).abs() < 1e-10 && vals[1].im.abs() < 1e-10);
    }

    #[test]
    fn general_eigenvalues_complex_pair() {
        // rotation-like matrix: eigenvalues 1 ± 2i
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![-2.0, 1.0]]);
        let vals = eigenvalues(&a).unwrap();
        assert!((vals[0].re - 1.0).abs() < 1e-10);
        assert!((vals[0].im.abs() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn general_eigenvalues_random_trace_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = 7;
            let a = random_mat(&mut rng, n);
            let vals = eigenvalues(&a).unwrap();
            let tr: f64 = vals.iter().map(|v| v.re).sum();
            assert!((tr - a.trace()).abs() < 1e-8 * a.frob_norm().max(1.0) * n as f64);
            let det_eig: f64 = {
                // product of eigenvalues (complex pairs multiply to |λ|²)
                let mut prod_re = 1.0_f64;
                let mut i = 0;
                let mut vs = vals.clone();
                vs.sort_by(|a, b| (b.im.abs()).partial_cmp(&a.im.abs()).unwrap());
                while i < vs.len() {
                    if vs[i].im.abs() > 1e-12 {
                        prod_re *= vs[i].re * vs[i].re + vs[i].im * vs[i].im;
                        i += 2;
                    } else {
                        prod_re *= vs[i].re;
                        i += 1;
                    }
                }
                prod_re
            };
            let det_lu = crate::matcore::Lu::new(&a).unwrap().det();
            assert!((det_eig - det_lu).abs() < 1e-6 * det_lu.abs().max(1.0));
        }
    }
}
