//! Bipartite states and Hamiltonians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, hermitian_part, hermiticity_residual, identity, kron, max_abs,
    partial_trace_factors, partial_transpose_factors, trace_product, CMat, RVec,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::InvalidDimension(format!(
                "subsystem dimensions must be >= 2, got ({a}, {b})"
            )));
        }
        Ok(Dims { a, b })
    }

    pub fn qubits() -> Self {
        Dims { a: 2, b: 2 }
    }

    pub fn total(&self) -> usize {
        self.a * self.b
    }

    pub fn as_slice(&self) -> [usize; 2] {
        [self.a, self.b]
    }

    pub fn of(&self, which: Subsystem) -> usize {
        match which {
            Subsystem::A => self.a,
            Subsystem::B => self.b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn index(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
        }
    }

    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Traces out `which` from an operator on A⊗B.
pub fn partial_trace(m: &CMat, dims: Dims, which: Subsystem) -> Result<CMat> {
    partial_trace_factors(m, &dims.as_slice(), &[which.index()])
}

/// Transposes the `which` factor of an operator on A⊗B.
pub fn partial_transpose(m: &CMat, dims: Dims, which: Subsystem) -> Result<CMat> {
    partial_transpose_factors(m, &dims.as_slice(), &[which.index()])
}

/// Embeds a local operator as `op ⊗ 1` or `1 ⊗ op`.
pub fn embed_local(op: &CMat, dims: Dims, which: Subsystem) -> CMat {
    match which {
        Subsystem::A => kron(op, &identity(dims.b)),
        Subsystem::B => kron(&identity(dims.a), op),
    }
}

fn check_square(m: &CMat, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} has non-finite entries")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct QuantumState {
    dims: Dims,
    rho: CMat,
}

impl QuantumState {
    /// Validates Hermiticity, normalization and positivity. The stored matrix
    /// is the Hermitian part of the input.
    pub fn new(dims: Dims, rho: CMat) -> Result<Self> {
        check_square(&rho, dims.total(), "density matrix")?;
        let herm = hermiticity_residual(&rho);
        if herm > tol::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let rho = hermitian_part(&rho);
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > tol::TRACE {
            return Err(Error::NotNormalized(tr));
        }
        let min = crate::linalg::min_eigenvalue(&rho);
        if min < tol::EIGEN_FLOOR {
            return Err(Error::NotPositive(min));
        }
        Ok(QuantumState { dims, rho })
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        QuantumState { dims, rho: identity(n).scale(1.0 / n as f64) }
    }

    pub fn pure(dims: Dims, psi: &nalgebra::DVector<crate::linalg::C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        QuantumState::new(dims, crate::linalg::projector(&v))
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    /// Eigenvalues ascending, with small negative rounding clipped to 0.
    pub fn spectrum(&self) -> RVec {
        let (mut v, _) = hermitian_eig(&self.rho);
        v.iter_mut().for_each(|x| *x = x.max(0.0));
        v
    }

    pub fn reduced(&self, keep: Subsystem) -> CMat {
        partial_trace(&self.rho, self.dims, keep.other()).expect("dims are consistent")
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.rho, &self.rho).re
    }

    /// U ρ U† without revalidation (the result is a state whenever U is unitary).
    pub fn conjugated(&self, u: &CMat) -> QuantumState {
        QuantumState { dims: self.dims, rho: hermitian_part(&(u * &self.rho * u.adjoint())) }
    }
}

/// H = H_a ⊗ 1 + 1 ⊗ H_b + V with tr_a V = tr_b V = 0.
#[derive(Debug, Clone)]
pub struct BipartiteHamiltonian {
    dims: Dims,
    h_a: CMat,
    h_b: CMat,
    v: CMat,
}

impl BipartiteHamiltonian {
    pub fn new(dims: Dims, h_a: CMat, h_b: CMat, v: CMat) -> Result<Self> {
        check_square(&h_a, dims.a, "local Hamiltonian A")?;
        check_square(&h_b, dims.b, "local Hamiltonian B")?;
        check_square(&v, dims.total(), "interaction")?;
        for m in [&h_a, &h_b, &v] {
            let r = hermiticity_residual(m);
            if r > tol::HERMITIAN {
                return Err(Error::NotHermitian(r));
            }
        }
        for which in [Subsystem::A, Subsystem::B] {
            let r = max_abs(&partial_trace(&v, dims, which)?);
            if r > tol::INTERACTION_PTRACE {
                return Err(Error::InvalidParameter(format!(
                    "interaction has nonzero partial trace over {which:?} ({r:.3e})"
                )));
            }
        }
        Ok(BipartiteHamiltonian {
            dims,
            h_a: hermitian_part(&h_a),
            h_b: hermitian_part(&h_b),
            v: hermitian_part(&v),
        })
    }

    /// Splits a total Hamiltonian into local parts and a traceless-marginal
    /// interaction. The identity component is assigned to H_a.
    pub fn from_total(dims: Dims, h: &CMat) -> Result<Self> {
        check_square(h, dims.total(), "Hamiltonian")?;
        let r = hermiticity_residual(h);
        if r > tol::HERMITIAN {
            return Err(Error::NotHermitian(r));
        }
        let h = hermitian_part(h);
        let offset = h.trace() / (dims.total() as f64);
        let h_a = partial_trace(&h, dims, Subsystem::B)?.unscale(dims.b as f64);
        let h_b = partial_trace(&h, dims, Subsystem::A)?.unscale(dims.a as f64)
            - identity(dims.b) * offset;
        let v = &h - embed_local(&h_a, dims, Subsystem::A) - embed_local(&h_b, dims, Subsystem::B);
        BipartiteHamiltonian::new(dims, h_a, h_b, hermitian_part(&v))
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn local(&self, which: Subsystem) -> &CMat {
        match which {
            Subsystem::A => &self.h_a,
            Subsystem::B => &self.h_b,
        }
    }

    pub fn interaction(&self) -> &CMat {
        &self.v
    }

    pub fn total(&self) -> CMat {
        embed_local(&self.h_a, self.dims, Subsystem::A)
            + embed_local(&self.h_b, self.dims, Subsystem::B)
            + &self.v
    }

    pub fn scaled(&self, s: f64) -> BipartiteHamiltonian {
        BipartiteHamiltonian {
            dims: self.dims,
            h_a: self.h_a.scale(s),
            h_b: self.h_b.scale(s),
            v: self.v.scale(s),
        }
    }

    /// Spectrum of the full operator, ascending.
    pub fn spectrum(&self) -> RVec {
        crate::linalg::hermitian_eigenvalues(&self.total())
    }
}

pub(crate) fn check_same_dims(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<()> {
    if state.dims() != ham.dims() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} vs Hamiltonian dims {:?}",
            state.dims(),
            ham.dims()
        )));
    }
    Ok(())
}

/// tr[ρ H] computed directly.
pub fn energy_direct(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<f64> {
    check_same_dims(state, ham)?;
    Ok(trace_product(state.matrix(), &ham.total()).re)
}
