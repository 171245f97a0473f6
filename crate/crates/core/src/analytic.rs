//! Singular-value bounds on parallel ergotropy and capacity for states with
//! maximally mixed marginals or Hamiltonians without local terms.
//!
//! Under either hypothesis only the correlation part moves under local
//! unitaries, T → O_a T O_bᵀ, and relaxing the adjoint rotations to all of
//! SO(d²−1) gives a von Neumann trace bound with a determinant-sign split.

use serde::{Deserialize, Serialize};

use crate::bloch::{bloch_decompose, BlochDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{svd, trace_product, RMat, RVec};
use crate::sampling::BellState;
use crate::state::{BipartiteHamiltonian, QuantumState, Subsystem};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    Lmm,
    NullLocal,
    Both,
    Neither,
}

impl Hypothesis {
    pub fn holds(self) -> bool {
        self != Hypothesis::Neither
    }
}

pub fn hypothesis_check(state: &QuantumState, ham: &BipartiteHamiltonian) -> Hypothesis {
    let dims = state.dims();
    let lmm = [Subsystem::A, Subsystem::B].iter().all(|&s| {
        let d = dims.of(s);
        let red = state.reduced(s);
        let mixed = crate::linalg::identity(d).unscale(d as f64);
        crate::linalg::max_abs(&(red - mixed)) <= tol::LMM
    });
    let null_local = match crate::bloch::hamiltonian_bloch(ham) {
        Ok(hb) => hb.h_a.norm() <= tol::NULL_LOCAL && hb.h_b.norm() <= tol::NULL_LOCAL,
        Err(_) => false,
    };
    match (lmm, null_local) {
        (true, true) => Hypothesis::Both,
        (true, false) => Hypothesis::Lmm,
        (false, true) => Hypothesis::NullLocal,
        (false, false) => Hypothesis::Neither,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignedSpectrum {
    /// Singular values, ascending.
    pub singular_values: RVec,
    /// Sign of the determinant; 0 when |det| ≤ 1e-12·(largest singular value)^n.
    pub det_sign: i8,
}

pub fn signed_spectrum(m: &RMat) -> Result<SignedSpectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("signed spectrum needs a square matrix, got {:?}", m.shape())));
    }
    let n = m.nrows();
    let (desc, _, _) = svd(m);
    let asc = RVec::from_iterator(n, desc.iter().rev().copied());
    let scale = desc.get(0).copied().unwrap_or(0.0);
    let det = m.determinant();
    let threshold = tol::DET_ZERO * scale.powi(n as i32);
    let det_sign = if det.abs() <= threshold || scale == 0.0 {
        0
    } else if det > 0.0 {
        1
    } else {
        -1
    };
    Ok(SignedSpectrum { singular_values: asc, det_sign })
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticBound {
    pub value: f64,
    /// The bound equals the true value (two qubits).
    pub exact: bool,
    /// Sign of det(−V T) used for the case split.
    pub det_sign: i8,
    pub hypothesis: Hypothesis,
}

struct Pieces {
    bloch: BlochDecomposition,
    dot: f64,
    low: f64,
    det_sign: i8,
    d: usize,
    hypothesis: Hypothesis,
}

fn pieces(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<Pieces> {
    let dims = state.dims();
    if dims.a != dims.b {
        return Err(Error::InvalidDimension(format!(
            "singular-value bound needs equal local dimensions, got ({}, {})",
            dims.a, dims.b
        )));
    }
    let hypothesis = hypothesis_check(state, ham);
    if !hypothesis.holds() {
        return Err(Error::HypothesisViolated(
            "state marginals are not maximally mixed and the Hamiltonian has local terms".into(),
        ));
    }
    let bloch = bloch_decompose(state, ham)?;
    let sv = signed_spectrum(bloch.v_mat())?;
    let st = signed_spectrum(bloch.t_mat())?;
    let n = sv.singular_values.len();
    let dot = sv.singular_values.dot(&st.singular_values);
    let low = sv.singular_values[0] * st.singular_values[0];
    // det(−VT) = (−1)^n det V det T.
    let parity: i8 = if n % 2 == 0 { 1 } else { -1 };
    let det_sign = parity * sv.det_sign * st.det_sign;
    Ok(Pieces { bloch, dot, low, det_sign, d: dims.a, hypothesis })
}

/// tr[ρV] + λ^{|V|}·λ^{|T|}, minus 2 λ_0^{|V|} λ_0^{|T|} when det(−VT) < 0.
pub fn pe_upper_bound_lmm(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<AnalyticBound> {
    let p = pieces(state, ham)?;
    let interaction = (p.bloch.v_mat() * p.bloch.t_mat()).trace();
    let rotated = if p.det_sign >= 0 { p.dot } else { p.dot - 2.0 * p.low };
    Ok(AnalyticBound {
        value: interaction + rotated,
        exact: p.d == 2,
        det_sign: p.det_sign,
        hypothesis: p.hypothesis,
    })
}

/// Parallel-capacity bound: 2(λ·λ − λ_0λ_0) for even d; for odd d, 2λ·λ or
/// 2(λ·λ − 2λ_0λ_0) depending on the sign of det(−VT).
pub fn pc_upper_bound(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<AnalyticBound> {
    let p = pieces(state, ham)?;
    let value = if p.d % 2 == 0 {
        2.0 * (p.dot - p.low)
    } else if p.det_sign >= 0 {
        2.0 * p.dot
    } else {
        2.0 * (p.dot - 2.0 * p.low)
    };
    Ok(AnalyticBound { value, exact: p.d == 2, det_sign: p.det_sign, hypothesis: p.hypothesis })
}

/// Parallel ergotropy of a two-qubit Werner state:
/// p(⟨ψ|V|ψ⟩ + tr|V|), with tr|V| − 2λ_0 in place of tr|V| when det V < 0.
pub fn werner_pe(p: f64, ham: &BipartiteHamiltonian, bell: BellState) -> Result<f64> {
    if ham.dims() != crate::state::Dims::qubits() {
        return Err(Error::InvalidDimension("Werner closed form is for two qubits".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("Werner visibility {p} outside [0, 1]")));
    }
    let hb = crate::bloch::hamiltonian_bloch(ham)?;
    let sv = signed_spectrum(&hb.v_mat)?;
    let psi = bell.vector();
    let expect = trace_product(&crate::linalg::projector(&psi), ham.interaction()).re;
    let trace_abs: f64 = sv.singular_values.iter().sum();
    let rotated = if sv.det_sign >= 0 { trace_abs } else { trace_abs - 2.0 * sv.singular_values[0] };
    Ok(p * (expect + rotated))
}
