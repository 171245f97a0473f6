//! Parallel capacity as an entanglement witness.
//!
//! Product states reach at most C1(H) = ‖H‖ − ΔE(H) − ΔE(−H), where ‖H‖ is
//! the spectral width and ΔE(±H) the gap between the lowest product-state
//! energy of ±H and its ground energy. A state whose parallel capacity
//! exceeds C1 is entangled.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::state_bloch;
use crate::direct::{parallel_capacity_lower, DirectOptions};
use crate::error::{Error, Result};
use crate::ergotropy::spectral_width;
use crate::linalg::{hermitian_eig, projector, CMat, C64};
use crate::sampling::RngSpec;
use crate::state::{BipartiteHamiltonian, Dims, QuantumState};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapSign {
    Plus,
    Minus,
}

impl GapSign {
    fn factor(self) -> f64 {
        match self {
            GapSign::Plus => 1.0,
            GapSign::Minus => -1.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            GapSign::Plus => "gap/plus",
            GapSign::Minus => "gap/minus",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop when one sweep lowers the energy by less than this.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions { restarts: 32, seed: 0, tol: 1e-10, max_sweeps: 2000 }
    }
}

#[derive(Debug, Clone)]
pub struct ProductMinimum {
    /// Lowest energy of sign·H found over product states.
    pub energy: f64,
    pub phi: DVector<C64>,
    pub psi: DVector<C64>,
}

/// M[a, b] = Σ_jk conj(ψ_j) H[(a,j),(b,k)] ψ_k.
fn contract_b(h: &CMat, dims: Dims, psi: &DVector<C64>) -> CMat {
    let (da, db) = (dims.a, dims.b);
    CMat::from_fn(da, da, |a, b| {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..db {
            for k in 0..db {
                s += psi[j].conj() * h[(a * db + j, b * db + k)] * psi[k];
            }
        }
        s
    })
}

/// M[j, k] = Σ_ab conj(φ_a) H[(a,j),(b,k)] φ_b.
fn contract_a(h: &CMat, dims: Dims, phi: &DVector<C64>) -> CMat {
    let (da, db) = (dims.a, dims.b);
    CMat::from_fn(db, db, |j, k| {
        let mut s = C64::new(0.0, 0.0);
        for a in 0..da {
            for b in 0..da {
                s += phi[a].conj() * h[(a * db + j, b * db + k)] * phi[b];
            }
        }
        s
    })
}

fn lowest(m: &CMat) -> (f64, DVector<C64>) {
    let (vals, vecs) = hermitian_eig(m);
    (vals[0], vecs.column(0).into_owned())
}

fn seesaw(h: &CMat, dims: Dims, mut psi: DVector<C64>, opts: &SeesawOptions) -> ProductMinimum {
    let (mut energy, mut phi) = lowest(&contract_b(h, dims, &psi));
    for _ in 0..opts.max_sweeps {
        let (_, p) = lowest(&contract_a(h, dims, &phi));
        psi = p;
        let (e, f) = lowest(&contract_b(h, dims, &psi));
        phi = f;
        let drop = energy - e;
        energy = e;
        if drop.abs() < opts.tol {
            break;
        }
    }
    ProductMinimum { energy, phi, psi }
}

/// Lowest product-state energy of sign·H by alternating eigenvector updates
/// from `opts.restarts` random starts on B.
pub fn product_minimum(ham: &BipartiteHamiltonian, sign: GapSign, opts: &SeesawOptions) -> ProductMinimum {
    let dims = ham.dims();
    let h = ham.total().scale(sign.factor());
    let base = RngSpec::new(opts.seed, sign.label());
    let runs: Vec<ProductMinimum> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = base.child(format!("restart/{k}")).rng();
            seesaw(&h, dims, rng.unit_vector(dims.b), opts)
        })
        .collect();
    runs.into_iter()
        .reduce(|best, r| if r.energy < best.energy { r } else { best })
        .expect("at least one restart")
}

/// ΔE_Sep(sign·H): lowest product-state energy minus the ground energy.
pub fn entanglement_gap(ham: &BipartiteHamiltonian, sign: GapSign, opts: &SeesawOptions) -> f64 {
    let spectrum = ham.spectrum();
    let ground = match sign {
        GapSign::Plus => spectrum[0],
        GapSign::Minus => -spectrum[spectrum.len() - 1],
    };
    product_minimum(ham, sign, opts).energy - ground
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ceiling {
    pub ceiling_c1: f64,
    pub h_norm_inf: f64,
    pub gap_plus: f64,
    pub gap_minus: f64,
}

pub fn capacity_ceiling(ham: &BipartiteHamiltonian, opts: &SeesawOptions) -> Ceiling {
    let h_norm_inf = spectral_width(ham);
    let gap_plus = entanglement_gap(ham, GapSign::Plus, opts);
    let gap_minus = entanglement_gap(ham, GapSign::Minus, opts);
    Ceiling { ceiling_c1: h_norm_inf - gap_plus - gap_minus, h_norm_inf, gap_plus, gap_minus }
}

/// Largest parallel capacity reachable by product states.
pub fn capacity_ceiling_c1(ham: &BipartiteHamiltonian, opts: &SeesawOptions) -> f64 {
    capacity_ceiling(ham, opts).ceiling_c1
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FluctuationCheck {
    /// (d⁴/16)·tr[TᵀT]; for qubits, tr[TᵀT].
    pub lhs: f64,
    pub rhs: f64,
    pub detects: bool,
}

/// Work-fluctuation entanglement criterion as a function of the state's
/// Bloch data. Qubits use λ₀²+λ₁²+λ₂² > 1 − (|R_a|² − |R_b|²)².
pub fn fluctuation_criterion(state: &QuantumState) -> Result<FluctuationCheck> {
    let dims = state.dims();
    if dims.a != dims.b {
        return Err(Error::InvalidDimension(format!(
            "fluctuation criterion needs equal local dimensions, got ({}, {})",
            dims.a, dims.b
        )));
    }
    let sb = state_bloch(state)?;
    let d = dims.a as f64;
    let ra2 = sb.r_a.norm_squared();
    let rb2 = sb.r_b.norm_squared();
    let t2 = sb.t_mat.norm_squared();
    let (lhs, rhs) = if dims.a == 2 {
        (t2, 1.0 - (ra2 - rb2).powi(2))
    } else {
        let s1 = d - 1.0 + d * d / 4.0 * ((d - 2.0) / 2.0 * (ra2 + rb2) - d / 2.0 * (ra2 - rb2).abs());
        (d.powi(4) / 16.0 * t2, s1)
    };
    Ok(FluctuationCheck { lhs, rhs, detects: lhs > rhs })
}

#[derive(Debug, Clone, Copy)]
pub struct WitnessOptions {
    pub seesaw: SeesawOptions,
    pub direct: DirectOptions,
    /// A capacity must exceed the ceiling by this much to count.
    pub margin: f64,
    /// Restarts per candidate in the usefulness search.
    pub usefulness_restarts: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            seesaw: SeesawOptions::default(),
            direct: DirectOptions::default(),
            margin: tol::DETECTION_MARGIN,
            usefulness_restarts: 4,
        }
    }
}

impl WitnessOptions {
    pub fn with_seed(seed: u64) -> Self {
        WitnessOptions {
            seesaw: SeesawOptions { seed, ..Default::default() },
            direct: DirectOptions::with_seed(seed),
            ..Default::default()
        }
    }
}

/// State-independent part of a witness evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HamiltonianProfile {
    pub ceiling: Ceiling,
    /// Best parallel capacity found over the eigenvectors of H.
    pub max_capacity: f64,
    /// Some state beats the product ceiling, so the witness can fire at all.
    pub discriminating: bool,
}

pub fn hamiltonian_profile(ham: &BipartiteHamiltonian, opts: &WitnessOptions) -> Result<HamiltonianProfile> {
    let ceiling = capacity_ceiling(ham, &opts.seesaw);
    let dims = ham.dims();
    let (_, vecs) = hermitian_eig(&ham.total());
    let direct = DirectOptions { restarts: opts.usefulness_restarts, ..opts.direct };
    let mut max_capacity: f64 = 0.0;
    for n in 0..dims.total() {
        let state = QuantumState::new(dims, projector(&vecs.column(n).into_owned()))?;
        max_capacity = max_capacity.max(parallel_capacity_lower(&state, ham, &direct)?.value);
    }
    Ok(HamiltonianProfile {
        ceiling,
        max_capacity,
        discriminating: max_capacity > ceiling.ceiling_c1 + opts.margin,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub parallel_capacity: f64,
    pub ceiling_c1: f64,
    pub h_norm_inf: f64,
    pub gap_plus: f64,
    pub gap_minus: f64,
    pub capacity_detects: bool,
    /// Absent when the local dimensions differ.
    pub fluctuation_detects: Option<bool>,
    pub fluctuation: Option<FluctuationCheck>,
    pub hamiltonian_max_capacity: f64,
    pub hamiltonian_discriminating: bool,
}

/// Evaluates both witnesses against a precomputed Hamiltonian profile.
pub fn witness_report_with(
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    profile: &HamiltonianProfile,
    opts: &WitnessOptions,
) -> Result<WitnessReport> {
    let capacity = parallel_capacity_lower(state, ham, &opts.direct)?.value;
    let fluctuation = if state.dims().a == state.dims().b { Some(fluctuation_criterion(state)?) } else { None };
    let c = profile.ceiling;
    Ok(WitnessReport {
        parallel_capacity: capacity,
        ceiling_c1: c.ceiling_c1,
        h_norm_inf: c.h_norm_inf,
        gap_plus: c.gap_plus,
        gap_minus: c.gap_minus,
        capacity_detects: capacity > c.ceiling_c1 + opts.margin,
        fluctuation_detects: fluctuation.map(|f| f.detects),
        fluctuation,
        hamiltonian_max_capacity: profile.max_capacity,
        hamiltonian_discriminating: profile.discriminating,
    })
}

pub fn witness_report(state: &QuantumState, ham: &BipartiteHamiltonian, opts: &WitnessOptions) -> Result<WitnessReport> {
    let profile = hamiltonian_profile(ham, opts)?;
    witness_report_with(state, ham, &profile, opts)
}
