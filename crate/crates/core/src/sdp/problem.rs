use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RMat;

/// Symmetric real matrix stored as its upper triangle (i ≤ j).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseSym {
    pub dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseSym {
    pub fn new(dim: usize) -> Self {
        SparseSym { dim, entries: Vec::new() }
    }

    /// Builds from triplets enumerating every nonzero of a symmetric matrix.
    /// Lower-triangle copies are dropped and repeated upper entries summed.
    pub fn from_full_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut upper: Vec<(u32, u32, f64)> = triplets
            .into_iter()
            .filter(|&(i, j, _)| i <= j)
            .map(|(i, j, v)| (i as u32, j as u32, v))
            .collect();
        upper.sort_by_key(|&(i, j, _)| (i, j));
        let mut entries: Vec<(u32, u32, f64)> = Vec::with_capacity(upper.len());
        for (i, j, v) in upper {
            match entries.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => entries.push((i, j, v)),
            }
        }
        entries.retain(|e| e.2 != 0.0);
        SparseSym { dim, entries }
    }

    /// Adds `v` at (i, j) and (j, i).
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push((i as u32, j as u32, v));
    }

    pub fn from_dense(m: &RMat) -> Self {
        let n = m.nrows();
        let mut s = SparseSym::new(n);
        for j in 0..n {
            for i in 0..=j {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                if v != 0.0 {
                    s.entries.push((i as u32, j as u32, v));
                }
            }
        }
        s
    }

    pub fn identity(n: usize) -> Self {
        SparseSym { dim: n, entries: (0..n).map(|i| (i as u32, i as u32, 1.0)).collect() }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|&(i, j, v)| (i as usize, j as usize, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&mut self, s: f64) {
        self.entries.iter_mut().for_each(|e| e.2 *= s);
    }

    pub fn to_dense(&self) -> RMat {
        let mut m = RMat::zeros(self.dim, self.dim);
        self.add_to(&mut m, 1.0);
        m
    }

    /// m += s · self.
    pub fn add_to(&self, m: &mut RMat, s: f64) {
        for (i, j, v) in self.entries() {
            m[(i, j)] += s * v;
            if i != j {
                m[(j, i)] += s * v;
            }
        }
    }

    /// tr[self · m] for any square `m`.
    pub fn dot(&self, m: &RMat) -> f64 {
        self.entries()
            .map(|(i, j, v)| if i == j { v * m[(i, i)] } else { v * (m[(i, j)] + m[(j, i)]) })
            .sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries()
            .map(|(i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0, |a, (_, _, v)| a.max(v.abs()))
    }
}

#[derive(Debug, Clone)]
pub struct Constraint {
    /// (block index, coefficient matrix); blocks not listed have zero coefficient.
    pub terms: Vec<(usize, SparseSym)>,
    pub rhs: f64,
}

/// Primal: minimize Σ_k ⟨C_k, X_k⟩ s.t. Σ_k ⟨A_ik, X_k⟩ = b_i, X_k ⪰ 0.
/// Dual: maximize bᵀy s.t. Z_k = C_k − Σ_i y_i A_ik ⪰ 0.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_sizes: Vec<usize>,
    pub objective: Vec<SparseSym>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Residuals {
    /// max_i |b_i − Σ_k ⟨A_ik, X_k⟩|.
    pub primal: f64,
    /// max entry of |C_k − Z_k − Σ_i y_i A_ik|.
    pub dual: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// |p − d| / (1 + |p| + |d|).
    pub relative_gap: f64,
    /// Smallest eigenvalue across primal blocks.
    pub min_eig_x: f64,
    /// Smallest eigenvalue across dual slack blocks.
    pub min_eig_z: f64,
}

impl SdpProblem {
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.block_sizes.len() {
            return Err(Error::InvalidParameter("one objective matrix per block is required".into()));
        }
        for (k, c) in self.objective.iter().enumerate() {
            if c.dim != self.block_sizes[k] {
                return Err(Error::DimensionMismatch(format!("objective block {k} has wrong size")));
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            for (k, a) in &con.terms {
                if *k >= self.block_sizes.len() || a.dim != self.block_sizes[*k] {
                    return Err(Error::DimensionMismatch(format!("constraint {i} references a bad block")));
                }
                if a.entries().any(|(r, s, v)| r >= a.dim || s >= a.dim || !v.is_finite()) {
                    return Err(Error::InvalidParameter(format!("constraint {i} has bad entries")));
                }
            }
            if !con.rhs.is_finite() {
                return Err(Error::InvalidParameter(format!("constraint {i} has non-finite rhs")));
            }
        }
        let vars: usize = self.block_sizes.iter().map(|n| n * (n + 1) / 2).sum();
        if self.constraints.len() > vars {
            return Err(Error::InvalidParameter(format!(
                "{} equalities exceed the {vars} free primal entries",
                self.constraints.len()
            )));
        }
        Ok(())
    }

    /// Σ_k ⟨A_ik, X_k⟩ for every constraint.
    pub fn apply(&self, x: &[RMat]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|c| c.terms.iter().map(|(k, a)| a.dot(&x[*k])).sum())
            .collect()
    }

    /// Σ_i y_i A_ik per block.
    pub fn apply_adjoint(&self, y: &[f64]) -> Vec<RMat> {
        let mut out: Vec<RMat> = self.block_sizes.iter().map(|&n| RMat::zeros(n, n)).collect();
        for (c, &yi) in self.constraints.iter().zip(y) {
            for (k, a) in &c.terms {
                a.add_to(&mut out[*k], yi);
            }
        }
        out
    }

    pub fn primal_objective(&self, x: &[RMat]) -> f64 {
        self.objective.iter().zip(x).map(|(c, xk)| c.dot(xk)).sum()
    }

    pub fn dual_objective(&self, y: &[f64]) -> f64 {
        self.constraints.iter().zip(y).map(|(c, yi)| c.rhs * yi).sum()
    }

    /// Residuals recomputed from scratch for a candidate (X, y, Z).
    pub fn residuals(&self, x: &[RMat], y: &[f64], z: &[RMat]) -> Residuals {
        let ax = self.apply(x);
        let primal = self
            .constraints
            .iter()
            .zip(&ax)
            .fold(0.0_f64, |acc, (c, v)| acc.max((c.rhs - v).abs()));
        let aty = self.apply_adjoint(y);
        let mut dual: f64 = 0.0;
        for k in 0..self.block_sizes.len() {
            let mut r = self.objective[k].to_dense();
            r -= &z[k];
            r -= &aty[k];
            dual = dual.max(crate::linalg::max_abs_real(&r));
        }
        let p = self.primal_objective(x);
        let d = self.dual_objective(y);
        let min_eig = |ms: &[RMat]| {
            ms.iter()
                .map(|m| crate::linalg::symmetric_eigenvalues(m).get(0).copied().unwrap_or(0.0))
                .fold(f64::INFINITY, f64::min)
        };
        Residuals {
            primal,
            dual,
            primal_objective: p,
            dual_objective: d,
            relative_gap: (p - d).abs() / (1.0 + p.abs() + d.abs()),
            min_eig_x: min_eig(x),
            min_eig_z: min_eig(z),
        }
    }
}
