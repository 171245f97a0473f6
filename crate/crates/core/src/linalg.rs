//! Dense complex linear algebra on top of `nalgebra`, plus the tensor-factor
//! manipulations (partial trace, partial transpose) used throughout.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&CMat]) -> CMat {
    let mut out = CMat::from_element(1, 1, ONE);
    for f in factors {
        out = out.kronecker(*f);
    }
    out
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

/// tr[A B] without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise modulus of `U†U - 1`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let g = u.adjoint() * u - identity(u.nrows());
    g.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.abs()))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues ascending and
/// eigenvectors as the matching columns.
pub fn hermitian_eig(m: &CMat) -> (RVec, CMat) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = RVec::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> RVec {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    RVec::from_vec(v)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Symmetric real eigenvalues, ascending.
pub fn symmetric_eigenvalues(m: &RMat) -> RVec {
    let sym = (m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    RVec::from_vec(v)
}

/// Real SVD with singular values descending: `m = U diag(s) V_t`.
pub fn svd(m: &RMat) -> (RVec, RMat, RMat) {
    let s = m.clone().svd(true, true);
    let u = s.u.expect("u requested");
    let vt = s.v_t.expect("v_t requested");
    let k = s.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s.singular_values[j].total_cmp(&s.singular_values[i]));
    let values = RVec::from_iterator(k, order.iter().map(|&i| s.singular_values[i]));
    let mut u_sorted = RMat::zeros(u.nrows(), k);
    let mut vt_sorted = RMat::zeros(k, vt.ncols());
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u.column(src));
        vt_sorted.set_row(dst, &vt.row(src));
    }
    (values, u_sorted, vt_sorted)
}

/// `exp(-i H)` for Hermitian `H`.
pub fn expm_i_hermitian(h: &CMat) -> CMat {
    let (vals, vecs) = hermitian_eig(h);
    let phases = CMat::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C64::from_polar(1.0, -x)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Rank-one projector |v⟩⟨v|.
pub fn projector(v: &DVector<C64>) -> CMat {
    v * v.adjoint()
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn undigits(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

fn check_factors(m: &CMat, dims: &[usize], factors: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but factor dims {:?} multiply to {}",
            m.nrows(),
            m.ncols(),
            dims,
            total
        )));
    }
    if let Some(&f) = factors.iter().find(|&&f| f >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "factor index {f} out of range for {} factors",
            dims.len()
        )));
    }
    Ok(())
}

/// Traces out the listed tensor factors of `m`, whose factor dimensions are
/// `dims` (first factor most significant).
pub fn partial_trace_factors(m: &CMat, dims: &[usize], traced: &[usize]) -> Result<CMat> {
    check_factors(m, dims, traced)?;
    let kept: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let total = m.nrows();
    let all: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
    let reduced: Vec<usize> = all
        .iter()
        .map(|d| undigits(&kept.iter().map(|&k| d[k]).collect::<Vec<_>>(), &kept_dims))
        .collect();
    let mut out = CMat::zeros(out_dim, out_dim);
    for i in 0..total {
        for j in 0..total {
            if traced.iter().all(|&k| all[i][k] == all[j][k]) {
                out[(reduced[i], reduced[j])] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the listed tensor factors of `m`.
pub fn partial_transpose_factors(m: &CMat, dims: &[usize], factors: &[usize]) -> Result<CMat> {
    check_factors(m, dims, factors)?;
    let total = m.nrows();
    let all: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            let mut di = all[i].clone();
            let mut dj = all[j].clone();
            for &k in factors {
                std::mem::swap(&mut di[k], &mut dj[k]);
            }
            out[(undigits(&di, dims), undigits(&dj, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_factors(m: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    check_factors(m, dims, perm)?;
    let new_dims: Vec<usize> = perm.iter().map(|&k| dims[k]).collect();
    let total = m.nrows();
    let map: Vec<usize> = (0..total)
        .map(|i| {
            let d = digits(i, dims);
            undigits(&perm.iter().map(|&k| d[k]).collect::<Vec<_>>(), &new_dims)
        })
        .collect();
    let mut out = CMat::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_roundtrip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(undigits(&digits(i, &dims), &dims), i);
        }
    }

    #[test]
    fn eig_sorted_ascending() {
        let m = CMat::from_diagonal(&DVector::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]));
        let (v, _) = hermitian_eig(&m);
        assert_eq!(v.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn svd_sorted_descending() {
        let m = RMat::from_diagonal(&RVec::from_vec(vec![1.0, -3.0, 2.0]));
        let (s, u, vt) = svd(&m);
        assert_eq!(s.as_slice(), &[3.0, 2.0, 1.0]);
        let back = &u * RMat::from_diagonal(&s) * &vt;
        assert!((back - m).abs().max() < 1e-12);
    }

    #[test]
    fn permute_swaps_kron() {
        let a = CMat::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 1.0));
        let b = CMat::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let ab = kron(&a, &b);
        let ba = permute_factors(&ab, &[2, 3], &[1, 0]).unwrap();
        assert!(max_abs(&(ba - kron(&b, &a))) < 1e-14);
    }
}
