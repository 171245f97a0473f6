//! Global ergotropy and capacity by spectral rearrangement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, trace_product, CMat, RVec};
use crate::state::{check_same_dims, BipartiteHamiltonian, QuantumState};

#[derive(Debug, Clone)]
pub struct ErgotropyResult {
    pub value: f64,
    pub passive_state: QuantumState,
    pub optimal_unitary: CMat,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralEnergies {
    pub energy: f64,
    /// Descending populations on ascending energies.
    pub passive: f64,
    /// Descending populations on descending energies.
    pub active: f64,
}

/// Energy, passive energy and maximal energy reachable by unitaries, for an
/// operator pair of equal size.
pub fn spectral_energies(rho: &CMat, h: &CMat) -> Result<SpectralEnergies> {
    if rho.shape() != h.shape() || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "state {:?} vs Hamiltonian {:?}",
            rho.shape(),
            h.shape()
        )));
    }
    let (r, _) = hermitian_eig(rho);
    let (e, _) = hermitian_eig(h);
    let n = r.len();
    let passive = (0..n).map(|k| r[n - 1 - k] * e[k]).sum();
    let active = (0..n).map(|k| r[k] * e[k]).sum();
    Ok(SpectralEnergies { energy: trace_product(rho, h).re, passive, active })
}

/// Ergotropy of a single (not necessarily bipartite) system.
pub fn ergotropy_of(rho: &CMat, h: &CMat) -> Result<f64> {
    let s = spectral_energies(rho, h)?;
    Ok(s.energy - s.passive)
}

pub fn global_ergotropy(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<ErgotropyResult> {
    check_same_dims(state, ham)?;
    let h = ham.total();
    let (r, rv) = hermitian_eig(state.matrix());
    let (e, ev) = hermitian_eig(&h);
    let n = r.len();
    // Sum over k of |ε_k⟩⟨r_{n-1-k}|: largest population onto the ground level.
    let mut u = CMat::zeros(n, n);
    for k in 0..n {
        u += ev.column(k) * rv.column(n - 1 - k).adjoint();
    }
    let passive_state = state.conjugated(&u);
    let passive: f64 = (0..n).map(|k| r[n - 1 - k] * e[k]).sum();
    let energy = trace_product(state.matrix(), &h).re;
    Ok(ErgotropyResult { value: (energy - passive).max(0.0), passive_state, optimal_unitary: u })
}

pub fn global_capacity(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<f64> {
    check_same_dims(state, ham)?;
    let s = spectral_energies(state.matrix(), &ham.total())?;
    Ok((s.active - s.passive).max(0.0))
}

/// Ergotropy under unitaries built from arbitrary time-dependent local
/// controls with the interaction switched on. Those generate the full unitary
/// group, so this is the global ergotropy.
pub fn extended_parallel_ergotropy(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<f64> {
    Ok(global_ergotropy(state, ham)?.value)
}

/// Spectral width E_max − E_0.
pub fn spectral_width(ham: &BipartiteHamiltonian) -> f64 {
    let e: RVec = ham.spectrum();
    e[e.len() - 1] - e[0]
}
