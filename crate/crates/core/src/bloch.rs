//! Generalized Bloch coordinates of a bipartite state and Hamiltonian.
//!
//! ρ = 1/(d_a d_b) + ½ R_a·σ ⊗ 1/d_b + ½ 1/d_a ⊗ R_b·σ + ¼ Σ T_ij σ_i ⊗ σ_j
//! H = e_0 1 + Σ h_a^i σ_i ⊗ 1 + Σ h_b^j 1 ⊗ σ_j + Σ V_ji σ_i ⊗ σ_j
//!
//! The interaction matrix is indexed (j, i) so that the interaction energy
//! is tr[V T].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gpo::{gpo_basis, GpoBasis};
use crate::linalg::{identity, kron, trace_product, CMat, RMat, RVec};
use crate::state::{check_same_dims, BipartiteHamiltonian, Dims, QuantumState};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateBloch {
    pub dims: Dims,
    pub r_a: RVec,
    pub r_b: RVec,
    pub t_mat: RMat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianBloch {
    pub dims: Dims,
    /// Coefficient of the identity, tr H / (d_a d_b).
    pub offset: f64,
    pub h_a: RVec,
    pub h_b: RVec,
    pub v_mat: RMat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub state: StateBloch,
    pub ham: HamiltonianBloch,
}

impl BlochDecomposition {
    pub fn r_a(&self) -> &RVec {
        &self.state.r_a
    }
    pub fn r_b(&self) -> &RVec {
        &self.state.r_b
    }
    pub fn t_mat(&self) -> &RMat {
        &self.state.t_mat
    }
    pub fn h_a(&self) -> &RVec {
        &self.ham.h_a
    }
    pub fn h_b(&self) -> &RVec {
        &self.ham.h_b
    }
    pub fn v_mat(&self) -> &RMat {
        &self.ham.v_mat
    }

    pub fn energy(&self) -> f64 {
        self.ham.offset
            + self.ham.h_a.dot(&self.state.r_a)
            + self.ham.h_b.dot(&self.state.r_b)
            + (&self.ham.v_mat * &self.state.t_mat).trace()
    }
}

struct Bases {
    a: GpoBasis,
    b: GpoBasis,
}

fn bases(dims: Dims) -> Result<Bases> {
    Ok(Bases { a: gpo_basis(dims.a)?, b: gpo_basis(dims.b)? })
}

fn local_coeffs(m: &CMat, dims: Dims, bs: &Bases) -> (RVec, RVec) {
    let ia = identity(dims.a);
    let ib = identity(dims.b);
    let ra = RVec::from_iterator(
        bs.a.len(),
        bs.a.elements.iter().map(|s| trace_product(&kron(s, &ib), m).re),
    );
    let rb = RVec::from_iterator(
        bs.b.len(),
        bs.b.elements.iter().map(|s| trace_product(&kron(&ia, s), m).re),
    );
    (ra, rb)
}

fn correlation_coeffs(m: &CMat, bs: &Bases) -> RMat {
    RMat::from_fn(bs.a.len(), bs.b.len(), |i, j| {
        trace_product(&kron(&bs.a.elements[i], &bs.b.elements[j]), m).re
    })
}

pub fn state_bloch(state: &QuantumState) -> Result<StateBloch> {
    let dims = state.dims();
    let bs = bases(dims)?;
    let (r_a, r_b) = local_coeffs(state.matrix(), dims, &bs);
    let t_mat = correlation_coeffs(state.matrix(), &bs);
    Ok(StateBloch { dims, r_a, r_b, t_mat })
}

pub fn hamiltonian_bloch(ham: &BipartiteHamiltonian) -> Result<HamiltonianBloch> {
    let dims = ham.dims();
    let bs = bases(dims)?;
    let h = ham.total();
    let (ha, hb) = local_coeffs(&h, dims, &bs);
    let h_a = ha.unscale(2.0 * dims.b as f64);
    let h_b = hb.unscale(2.0 * dims.a as f64);
    let v_mat = correlation_coeffs(&h, &bs).transpose().unscale(4.0);
    let offset = h.trace().re / dims.total() as f64;
    Ok(HamiltonianBloch { dims, offset, h_a, h_b, v_mat })
}

pub fn bloch_decompose(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<BlochDecomposition> {
    check_same_dims(state, ham)?;
    Ok(BlochDecomposition { state: state_bloch(state)?, ham: hamiltonian_bloch(ham)? })
}

/// Energy h_a·R_a + h_b·R_b + tr[V T] (plus the identity offset).
pub fn energy(state: &QuantumState, ham: &BipartiteHamiltonian) -> Result<f64> {
    Ok(bloch_decompose(state, ham)?.energy())
}

/// Rebuilds ρ from its Bloch coordinates.
pub fn reconstruct_state(sb: &StateBloch) -> Result<CMat> {
    let dims = sb.dims;
    let bs = bases(dims)?;
    let ia = identity(dims.a);
    let ib = identity(dims.b);
    let mut rho = identity(dims.total()).unscale(dims.total() as f64);
    rho += kron(&bs.a.combine(sb.r_a.as_slice()), &ib).scale(0.5 / dims.b as f64);
    rho += kron(&ia, &bs.b.combine(sb.r_b.as_slice())).scale(0.5 / dims.a as f64);
    for i in 0..bs.a.len() {
        for j in 0..bs.b.len() {
            let t = sb.t_mat[(i, j)];
            if t != 0.0 {
                rho += kron(&bs.a.elements[i], &bs.b.elements[j]).scale(0.25 * t);
            }
        }
    }
    Ok(rho)
}

/// Rebuilds the full Hamiltonian from its Bloch coordinates.
pub fn reconstruct_hamiltonian(hb: &HamiltonianBloch) -> Result<CMat> {
    let dims = hb.dims;
    let bs = bases(dims)?;
    let ia = identity(dims.a);
    let ib = identity(dims.b);
    let mut h = identity(dims.total()).scale(hb.offset);
    h += kron(&bs.a.combine(hb.h_a.as_slice()), &ib);
    h += kron(&ia, &bs.b.combine(hb.h_b.as_slice()));
    for i in 0..bs.a.len() {
        for j in 0..bs.b.len() {
            let v = hb.v_mat[(j, i)];
            if v != 0.0 {
                h += kron(&bs.a.elements[i], &bs.b.elements[j]).scale(v);
            }
        }
    }
    Ok(h)
}
