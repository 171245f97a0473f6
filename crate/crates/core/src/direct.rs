//! Lower bounds from explicit local unitaries: parallel ergotropy, local
//! ergotropy, parallel capacity and sequential (egoistic) extraction.
//!
//! Every reported value is an energy difference achieved by a concrete pair
//! of unitaries, so it is a certified lower bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{state_bloch, hamiltonian_bloch};
use crate::error::{Error, Result};
use crate::gpo::gpo_basis;
use crate::linalg::{c, expm_i_hermitian, identity, kron, trace_product, CMat, RMat, RVec};
use crate::optimize::{simplex_minimize, SimplexOptions};
use crate::sampling::RngSpec;
use crate::state::{check_same_dims, BipartiteHamiltonian, Dims, QuantumState, Subsystem};

/// Parameters of one local unitary. Qubits use (θ, φ, γ); larger dimensions
/// use coefficients x_j of exp(−i Σ x_j σ^j).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitaryParams {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl LocalUnitaryParams {
    pub fn len_for(dim: usize) -> usize {
        if dim == 2 {
            3
        } else {
            dim * dim - 1
        }
    }

    /// Parameters of the identity (up to a global phase on qubits).
    pub fn identity(dim: usize) -> Self {
        let values = if dim == 2 { vec![0.0, 0.0, std::f64::consts::PI] } else { vec![0.0; dim * dim - 1] };
        LocalUnitaryParams { dim, values }
    }

    /// Uniform draw from the parameter box.
    pub fn random(dim: usize, rng: &mut crate::sampling::Sampler) -> Self {
        use std::f64::consts::PI;
        let values = if dim == 2 {
            vec![rng.uniform_in(0.0, PI), rng.uniform_in(0.0, 2.0 * PI), rng.uniform_in(0.0, 2.0 * PI)]
        } else {
            (0..dim * dim - 1).map(|_| rng.uniform_in(0.0, PI)).collect()
        };
        LocalUnitaryParams { dim, values }
    }

    pub fn unitary(&self) -> CMat {
        if self.dim == 2 {
            qubit_unitary(self.values[0], self.values[1], self.values[2])
        } else {
            let g = gpo_basis(self.dim).expect("dim >= 2");
            expm_i_hermitian(&g.combine(&self.values))
        }
    }
}

/// U(θ, φ, γ) = [[e^{i(γ−φ)/2} cos θ/2, e^{−i(γ+φ)/2} sin θ/2],
///               [e^{i(γ+φ)/2} sin θ/2, −e^{−i(γ−φ)/2} cos θ/2]].
pub fn qubit_unitary(theta: f64, phi: f64, gamma: f64) -> CMat {
    let (s, co) = (0.5 * theta).sin_cos();
    let e = |a: f64| c(a.cos(), a.sin());
    CMat::from_row_slice(
        2,
        2,
        &[
            e(0.5 * (gamma - phi)) * co,
            e(-0.5 * (gamma + phi)) * s,
            e(0.5 * (gamma + phi)) * s,
            -e(-0.5 * (gamma - phi)) * co,
        ],
    )
}

#[derive(Debug, Clone, Copy)]
pub struct DirectOptions {
    pub restarts: usize,
    pub seed: u64,
    pub simplex: SimplexOptions,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions { restarts: 16, seed: 0, simplex: SimplexOptions::default() }
    }
}

impl DirectOptions {
    pub fn with_seed(seed: u64) -> Self {
        DirectOptions { seed, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    Both,
    Only(Subsystem),
}

/// Best local-unitary pair found for one objective.
#[derive(Debug, Clone, Serialize)]
pub struct LocalOptimum {
    /// Energy of the initial state.
    pub initial_energy: f64,
    /// Energy after applying the unitaries.
    pub final_energy: f64,
    pub params_a: LocalUnitaryParams,
    pub params_b: LocalUnitaryParams,
    /// Index of the winning start (0 is the identity).
    pub best_start: usize,
}

impl LocalOptimum {
    pub fn unitary_a(&self) -> CMat {
        self.params_a.unitary()
    }
    pub fn unitary_b(&self) -> CMat {
        self.params_b.unitary()
    }
    pub fn unitary(&self) -> CMat {
        kron(&self.unitary_a(), &self.unitary_b())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectBound {
    pub value: f64,
    pub optimum: LocalOptimum,
}

fn split(dims: Dims, scope: Scope, x: &[f64], base_a: &LocalUnitaryParams, base_b: &LocalUnitaryParams)
    -> (LocalUnitaryParams, LocalUnitaryParams) {
    let na = LocalUnitaryParams::len_for(dims.a);
    match scope {
        Scope::Both => (
            LocalUnitaryParams { dim: dims.a, values: x[..na].to_vec() },
            LocalUnitaryParams { dim: dims.b, values: x[na..].to_vec() },
        ),
        Scope::Only(Subsystem::A) => (LocalUnitaryParams { dim: dims.a, values: x.to_vec() }, base_b.clone()),
        Scope::Only(Subsystem::B) => (base_a.clone(), LocalUnitaryParams { dim: dims.b, values: x.to_vec() }),
    }
}

fn start_vector(dims: Dims, scope: Scope, a: &LocalUnitaryParams, b: &LocalUnitaryParams) -> Vec<f64> {
    let _ = dims;
    match scope {
        Scope::Both => a.values.iter().chain(&b.values).copied().collect(),
        Scope::Only(Subsystem::A) => a.values.clone(),
        Scope::Only(Subsystem::B) => b.values.clone(),
    }
}

/// Minimizes `sign · tr[U ρ U† H]` over local unitaries in `scope`, from
/// the identity and `opts.restarts` random starts. Restart `k` draws from
/// stream `<label>/restart/k` of `opts.seed`.
pub fn optimize_local_energy(
    rho: &CMat,
    h: &CMat,
    dims: Dims,
    scope: Scope,
    sign: f64,
    label: &str,
    opts: &DirectOptions,
) -> Result<LocalOptimum> {
    let id_a = LocalUnitaryParams::identity(dims.a);
    let id_b = LocalUnitaryParams::identity(dims.b);
    let initial_energy = trace_product(rho, h).re;
    let gens_a = gpo_basis(dims.a)?;
    let gens_b = gpo_basis(dims.b)?;
    let local = |p: &LocalUnitaryParams, g: &crate::gpo::GpoBasis| -> CMat {
        if p.dim == 2 {
            qubit_unitary(p.values[0], p.values[1], p.values[2])
        } else {
            expm_i_hermitian(&g.combine(&p.values))
        }
    };
    let objective = |x: &[f64]| -> f64 {
        let (pa, pb) = split(dims, scope, x, &id_a, &id_b);
        let u = match scope {
            Scope::Both => kron(&local(&pa, &gens_a), &local(&pb, &gens_b)),
            Scope::Only(Subsystem::A) => kron(&local(&pa, &gens_a), &identity(dims.b)),
            Scope::Only(Subsystem::B) => kron(&identity(dims.a), &local(&pb, &gens_b)),
        };
        sign * trace_product(&(&u * rho * u.adjoint()), h).re
    };

    let base = RngSpec::new(opts.seed, label);
    let runs: Vec<Result<(f64, Vec<f64>)>> = (0..=opts.restarts)
        .into_par_iter()
        .map(|k| {
            let x0 = if k == 0 {
                start_vector(dims, scope, &id_a, &id_b)
            } else {
                let mut rng = base.child(format!("restart/{k}")).rng();
                let a = LocalUnitaryParams::random(dims.a, &mut rng);
                let b = LocalUnitaryParams::random(dims.b, &mut rng);
                start_vector(dims, scope, &a, &b)
            };
            let r = simplex_minimize(objective, &x0, &opts.simplex)?;
            // Re-evaluate at the returned point so the reported value is exact.
            Ok((objective(&r.x), r.x))
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    for (k, run) in runs.into_iter().enumerate() {
        let (f, x) = run?;
        if best.as_ref().is_none_or(|(bf, _, _)| f < *bf) {
            best = Some((f, x, k));
        }
    }
    let (f, x, best_start) = best.expect("at least the identity start runs");
    let (params_a, params_b) = split(dims, scope, &x, &id_a, &id_b);
    Ok(LocalOptimum { initial_energy, final_energy: sign * f, params_a, params_b, best_start })
}

/// max over U_a⊗U_b of tr[(ρ − UρU†) H].
pub fn pe_lower_bound(state: &QuantumState, ham: &BipartiteHamiltonian, opts: &DirectOptions) -> Result<DirectBound> {
    check_same_dims(state, ham)?;
    let opt = optimize_local_energy(state.matrix(), &ham.total(), state.dims(), Scope::Both, 1.0, "pe", opts)?;
    Ok(DirectBound { value: opt.initial_energy - opt.final_energy, optimum: opt })
}

/// Ergotropy restricted to unitaries on one subsystem.
pub fn local_ergotropy(
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    which: Subsystem,
    opts: &DirectOptions,
) -> Result<DirectBound> {
    check_same_dims(state, ham)?;
    let label = match which {
        Subsystem::A => "local/a",
        Subsystem::B => "local/b",
    };
    let opt = optimize_local_energy(state.matrix(), &ham.total(), state.dims(), Scope::Only(which), 1.0, label, opts)?;
    Ok(DirectBound { value: opt.initial_energy - opt.final_energy, optimum: opt })
}

/// Max-minus-min energy over parallel unitaries, each side optimized separately.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityBound {
    pub value: f64,
    pub max_energy: f64,
    pub min_energy: f64,
}

pub fn parallel_capacity_lower(
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    opts: &DirectOptions,
) -> Result<CapacityBound> {
    check_same_dims(state, ham)?;
    let h = ham.total();
    let lo = optimize_local_energy(state.matrix(), &h, state.dims(), Scope::Both, 1.0, "capacity/min", opts)?;
    let hi = optimize_local_energy(state.matrix(), &h, state.dims(), Scope::Both, -1.0, "capacity/max", opts)?;
    Ok(CapacityBound {
        value: hi.final_energy - lo.final_energy,
        max_energy: hi.final_energy,
        min_energy: lo.final_energy,
    })
}

/// ZYZ Euler rotation in SO(3).
pub fn euler_rotation(alpha: f64, beta: f64, gamma: f64) -> RMat {
    let rz = |t: f64| {
        let (s, c) = t.sin_cos();
        RMat::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
    };
    let (s, c) = beta.sin_cos();
    let ry = RMat::from_row_slice(3, 3, &[c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c]);
    rz(alpha) * ry * rz(gamma)
}

/// Parallel ergotropy of two qubits optimized over rotations of the Bloch
/// data instead of unitaries.
pub fn pe_lower_bound_so3(state: &QuantumState, ham: &BipartiteHamiltonian, opts: &DirectOptions) -> Result<f64> {
    check_same_dims(state, ham)?;
    if state.dims() != Dims::qubits() {
        return Err(Error::InvalidDimension("rotation parametrization needs two qubits".into()));
    }
    let sb = state_bloch(state)?;
    let hb = hamiltonian_bloch(ham)?;
    let energy_at = |x: &[f64]| -> f64 {
        let oa = euler_rotation(x[0], x[1], x[2]);
        let ob = euler_rotation(x[3], x[4], x[5]);
        let ra: RVec = &oa * &sb.r_a;
        let rb: RVec = &ob * &sb.r_b;
        hb.offset + hb.h_a.dot(&ra) + hb.h_b.dot(&rb) + (&hb.v_mat * (&oa * &sb.t_mat * ob.transpose())).trace()
    };
    let e0 = energy_at(&[0.0; 6]);
    let base = RngSpec::new(opts.seed, "pe-so3");
    let mut best = e0;
    for k in 0..=opts.restarts {
        let x0: Vec<f64> = if k == 0 {
            vec![0.0; 6]
        } else {
            let mut rng = base.child(format!("restart/{k}")).rng();
            (0..6).map(|_| rng.uniform_in(0.0, 2.0 * std::f64::consts::PI)).collect()
        };
        let r = simplex_minimize(energy_at, &x0, &opts.simplex)?;
        best = best.min(energy_at(&r.x));
    }
    Ok(e0 - best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyOrder {
    AFirst,
    BFirst,
    Cooperative,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrategyOutcome {
    pub order: StrategyOrder,
    pub work_first: f64,
    pub work_second: f64,
    pub total: f64,
}

/// One agent extracts its local ergotropy, then the other does the same on
/// the resulting state. `Cooperative` runs the joint optimization.
pub fn egoistic_total(
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    order: StrategyOrder,
    opts: &DirectOptions,
) -> Result<StrategyOutcome> {
    let (first, second) = match order {
        StrategyOrder::AFirst => (Subsystem::A, Subsystem::B),
        StrategyOrder::BFirst => (Subsystem::B, Subsystem::A),
        StrategyOrder::Cooperative => {
            let pe = pe_lower_bound(state, ham, opts)?.value;
            return Ok(StrategyOutcome { order, work_first: pe, work_second: 0.0, total: pe });
        }
    };
    let step1 = local_ergotropy(state, ham, first, opts)?;
    let after = state.conjugated(&step1.optimum.unitary());
    let step2 = local_ergotropy(&after, ham, second, opts)?;
    Ok(StrategyOutcome {
        order,
        work_first: step1.value,
        work_second: step2.value,
        total: step1.value + step2.value,
    })
}

fn cofactor3(t: &RMat) -> RMat {
    RMat::from_fn(3, 3, |i, j| {
        let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let minor = t[(r[0], c[0])] * t[(r[1], c[1])] - t[(r[0], c[1])] * t[(r[1], c[0])];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

/// Polynomial positivity test for ρ = ¼(1 + a·σ⊗1 + 1⊗b·σ + Σ T_ij σ_i⊗σ_j).
///
/// The three inequalities are 8 e_2, 16 e_3 and 256 det ρ ≥ 0, where e_k are
/// the elementary symmetric functions of the spectrum (e_1 = 1 for unit trace).
pub fn qubit_state_physicality(r_a: &RVec, r_b: &RVec, t_mat: &RMat) -> bool {
    const SLACK: f64 = 1e-12;
    let (c1, c2, c3) = qubit_positivity_polynomials(r_a, r_b, t_mat);
    c1 >= -SLACK && c2 >= -SLACK && c3 >= -SLACK
}

/// The three positivity polynomials (8 e_2, 16 e_3, 256 det ρ).
pub fn qubit_positivity_polynomials(a: &RVec, b: &RVec, t: &RMat) -> (f64, f64, f64) {
    let tt = t.norm_squared();
    let (aa, bb) = (a.norm_squared(), b.norm_squared());
    let s = tt + aa + bb;
    let det = t.determinant();
    let cof = cofactor3(t);
    let atb = a.dot(&(t * b));
    let c1 = 3.0 - s;
    let c2 = 2.0 * (atb - det) - (s - 1.0);
    let tta = t.transpose() * a;
    let tb = t * b;
    let c3 = 8.0 * (a.dot(&((t + &cof) * b)) - det) + (s - 1.0).powi(2)
        - 4.0 * (aa * bb + tta.norm_squared() + tb.norm_squared() + cof.norm_squared());
    (c1, c2, c3)
}
