//! Real Schur form with orthogonal accumulation, plus eigenvalue reordering
//! by swapping adjacent diagonal blocks (Sylvester + QR swaps).

use super::eig::{francis_qr, hessenberg, quasi_triangular_eigenvalues, Complex};
use super::{kron, DenseMatrix, Lu};
use crate::{Error, Result};

/// Real Schur decomposition `A = U T Uᵀ` with `U` orthogonal and `T`
/// quasi-upper-triangular (1×1 and 2×2 diagonal blocks).
pub fn real_schur(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("Schur of non-square matrix".into()));
    }
    let (mut t, q) = hessenberg(a, true);
    let mut u = q.expect("accumulated");
    francis_qr(&mut t, Some(&mut u))?;
    Ok((u, t))
}

/// Diagonal block structure of a quasi-triangular matrix: (start, size) list.
fn block_structure(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.rows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t.get(i + 1, i) != 0.0 {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

fn block_is_stable(t: &DenseMatrix, start: usize, size: usize) -> bool {
    if size == 1 {
        t.get(start, start) < 0.0
    } else {
        // complex pair: real part is the average of the diagonal
        0.5 * (t.get(start, start) + t.get(start + 1, start + 1)) < 0.0
    }
}

/// Swap adjacent diagonal blocks of sizes `p` (at `i`) and `q` (at `i+p`).
fn swap_adjacent_blocks(t: &mut DenseMatrix, u: &mut DenseMatrix, i: usize, p: usize, q: usize) -> Result<()> {
    let n = t.rows();
    let t11 = t.submatrix(i, i, p, p);
    let t12 = t.submatrix(i, i + p, p, q);
    let t22 = t.submatrix(i + p, i + p, q, q);
    // Solve T11 X - X T22 = T12 via Kronecker vectorization.
    let lhs = &kron(&DenseMatrix::identity(q), &t11) - &kron(&t22.transpose(), &DenseMatrix::identity(p));
    let lu = Lu::new(&lhs)?;
    if lu.is_singular(1e-13) {
        return Err(Error::DegenerateSpectrum("block swap with overlapping spectra".into()));
    }
    let x_vec = lu.solve_vec(&t12.vectorize())?;
    let x = DenseMatrix::from_vectorized(p, q, &x_vec);
    // Z = [X; -I] spans the T22-invariant subspace; QR gives the rotation.
    let z = DenseMatrix::vstack(&[&x, &DenseMatrix::scaled_identity(q, -1.0)]);
    let qrot = householder_q(&z);
    // Apply to the window rows/cols [i, i+p+q)
    let w = p + q;
    // T <- Q^T T (rows) ; T <- T Q (cols); U <- U Q
    let mut trows = DenseMatrix::zeros(w, n);
    for r in 0..w {
        for c in 0..n {
            trows.set(r, c, t.get(i + r, c));
        }
    }
    let trows = &qrot.transpose() * &trows;
    for r in 0..w {
        for c in 0..n {
            t.set(i + r, c, trows.get(r, c));
        }
    }
    let mut tcols = DenseMatrix::zeros(n, w);
    for r in 0..n {
        for c in 0..w {
            tcols.set(r, c, t.get(r, i + c));
        }
    }
    let tcols = &tcols * &qrot;
    for r in 0..n {
        for c in 0..w {
            t.set(r, i + c, tcols.get(r, c));
        }
    }
    let mut ucols = DenseMatrix::zeros(n, w);
    for r in 0..n {
        for c in 0..w {
            ucols.set(r, c, u.get(r, i + c));
        }
    }
    let ucols = &ucols * &qrot;
    for r in 0..n {
        for c in 0..w {
            u.set(r, i + c, ucols.get(r, c));
        }
    }
    // Clean the structural zeros in the swapped window.
    for r in 0..w {
        for c in 0..w {
            if r > c + 1 {
                t.set(i + r, i + c, 0.0);
            }
        }
    }
    // the (2,1) coupling between the two swapped blocks must vanish
    for r in q..w {
        for c in 0..q {
            t.set(i + r, i + c, 0.0);
        }
    }
    // kill negligible intra-block subdiagonals (turn near-real pairs into 1x1s)
    for d in 0..w.saturating_sub(1) {
        let r = i + d + 1;
        let c = i + d;
        let scale = t.get(r, r).abs() + t.get(c, c).abs();
        if t.get(r, c).abs() <= 1e-13 * scale.max(1.0) {
            t.set(r, c, 0.0);
        }
    }
    Ok(())
}

/// Full orthogonal factor of the Householder QR of a tall matrix.
fn householder_q(z: &DenseMatrix) -> DenseMatrix {
    let m = z.rows();
    let n = z.cols();
    let mut r = z.clone();
    let mut q = DenseMatrix::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        let mut x: Vec<f64> = (k..m).map(|i| r.get(i, k)).collect();
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
        for c in 0..n {
            let mut dot = 0.0;
            for (idx, i) in (k..m).enumerate() {
                dot += x[idx] * r.get(i, c);
            }
            let f = 2.0 * dot / norm2;
            for (idx, i) in (k..m).enumerate() {
                r.add_at(i, c, -f * x[idx]);
            }
        }
        for c in 0..m {
            let mut dot = 0.0;
            for (idx, i) in (k..m).enumerate() {
                dot += x[idx] * q.get(i, c);
            }
            let f = 2.0 * dot / norm2;
            for (idx, i) in (k..m).enumerate() {
                q.add_at(i, c, -f * x[idx]);
            }
        }
    }
    // q currently holds the product of reflectors applied to I from the left
    // (i.e. Qᵀ); return Q.
    q.transpose()
}

/// Reorder a real Schur form in place so that all stable (Re λ < 0) blocks
/// come first. Returns the dimension of the stable invariant subspace.
pub fn reorder_schur_stable_first(u: &mut DenseMatrix, t: &mut DenseMatrix) -> Result<usize> {
    loop {
        let blocks = block_structure(t);
        let mut swapped = false;
        for w in blocks.windows(2) {
            let (i1, s1) = w[0];
            let (_i2, s2) = w[1];
            if !block_is_stable(t, i1, s1) && block_is_stable(t, i1 + s1, s2) {
                swap_adjacent_blocks(t, u, i1, s1, s2)?;
                swapped = true;
                break;
            }
        }
        if !swapped {
            break;
        }
    }
    let blocks = block_structure(t);
    let mut dim = 0;
    for (start, size) in blocks {
        if block_is_stable(t, start, size) {
            dim += size;
        } else {
            break;
        }
    }
    Ok(dim)
}

/// Eigenvalues from a quasi-triangular matrix (re-export for callers that
/// already hold a Schur factor).
pub fn schur_eigenvalues(t: &DenseMatrix) -> Vec<Complex> {
    quasi_triangular_eigenvalues(t)
}
