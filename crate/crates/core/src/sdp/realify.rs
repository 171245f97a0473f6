//! Hermitian H = A + iB on C^n is represented by the real symmetric
//! [[A, −B], [B, A]] on R^{2n}. Index p < n is the real part of complex
//! coordinate p and n + p its imaginary part. Eigenvalues are those of H,
//! each doubled, so positivity is preserved in both directions, and
//! ⟨realify(H), realify(K)⟩ = 2 tr[H K].

use super::problem::SparseSym;
use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_residual, CMat, RMat, C64};
use crate::tol;

pub fn realify(h: &CMat) -> Result<RMat> {
    let r = hermiticity_residual(h);
    if r > tol::HERMITIAN {
        return Err(Error::NotHermitian(r));
    }
    let n = h.nrows();
    Ok(RMat::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => 0.5 * (z.re + h[(j % n, i % n)].re),
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    }))
}

/// Inverse of [`realify`], reading the first block column.
pub fn unrealify(m: &RMat) -> CMat {
    let n = m.nrows() / 2;
    CMat::from_fn(n, n, |i, j| c(m[(i, j)], m[(n + i, j)]))
}

/// Sparse realification from (row, col, value) entries that enumerate every
/// nonzero of a Hermitian matrix.
pub fn realify_sparse(n: usize, entries: &[(usize, usize, C64)]) -> SparseSym {
    let mut trip = Vec::with_capacity(4 * entries.len());
    for &(p, q, z) in entries {
        if z.re != 0.0 {
            trip.push((p, q, z.re));
            trip.push((n + p, n + q, z.re));
        }
        if z.im != 0.0 {
            trip.push((n + p, q, z.im));
            trip.push((p, n + q, -z.im));
        }
    }
    SparseSym::from_full_triplets(2 * n, trip)
}
