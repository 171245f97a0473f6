//! Generalized Gell-Mann operators: traceless Hermitian basis with
//! tr[σ_i σ_j] = 2 δ_ij.
//!
//! Ordering is symmetric off-diagonals (j<k, lexicographic), then the
//! antisymmetric family in the same order, then the diagonal family. It is
//! part of the serialized Bloch format and must not change.

use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpoKind {
    Symmetric,
    Antisymmetric,
    Diagonal,
}

impl GpoKind {
    /// σ^T = ±σ: antisymmetric elements are purely imaginary.
    pub fn transpose_sign(self) -> f64 {
        match self {
            GpoKind::Antisymmetric => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GpoBasis {
    pub dim: usize,
    pub elements: Vec<CMat>,
    pub kinds: Vec<GpoKind>,
}

impl GpoBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Real coefficients x_i = tr[σ_i m] (for Hermitian `m`).
    pub fn coefficients(&self, m: &CMat) -> Vec<f64> {
        self.elements
            .iter()
            .map(|s| crate::linalg::trace_product(s, m).re)
            .collect()
    }

    /// Σ_i x_i σ_i.
    pub fn combine(&self, x: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (s, &xi) in self.elements.iter().zip(x) {
            out += s.scale(xi);
        }
        out
    }
}

pub fn gpo_basis(d: usize) -> Result<GpoBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("GPO basis needs d >= 2, got {d}")));
    }
    let mut elements = Vec::with_capacity(d * d - 1);
    let mut kinds = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = c(1.0, 0.0);
            m[(k, j)] = c(1.0, 0.0);
            elements.push(m);
            kinds.push(GpoKind::Symmetric);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = c(0.0, -1.0);
            m[(k, j)] = c(0.0, 1.0);
            elements.push(m);
            kinds.push(GpoKind::Antisymmetric);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMat::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = c(norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) * norm, 0.0);
        elements.push(m);
        kinds.push(GpoKind::Diagonal);
    }
    Ok(GpoBasis { dim: d, elements, kinds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gpo_basis(2).unwrap();
        let x = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert!(max_abs(&(&b.elements[0] - x)) == 0.0);
        assert!(max_abs(&(&b.elements[1] - y)) == 0.0);
        assert!(max_abs(&(&b.elements[2] - z)) < 1e-15);
    }

    #[test]
    fn rejects_scalar() {
        assert!(gpo_basis(1).is_err());
    }
}
