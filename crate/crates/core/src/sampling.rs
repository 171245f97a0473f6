//! Reproducible random instances and the named model Hamiltonians.
//!
//! Randomness comes from ChaCha8 keyed by a 64-bit seed, with the stream id
//! derived from a text label (FNV-1a), so independent tasks can share a seed
//! without sharing a sequence. Normal draws use the Marsaglia polar method
//! with unit variance.

use nalgebra::DVector;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpo::gpo_basis;
use crate::linalg::{c, hermitian_part, identity, kron, projector, CMat, C64};
use crate::state::{BipartiteHamiltonian, Dims, QuantumState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: String,
}

impl RngSpec {
    pub fn new(seed: u64, stream: impl Into<String>) -> Self {
        RngSpec { seed, stream: stream.into() }
    }

    /// A sub-stream, labelled `parent/label`.
    pub fn child(&self, label: impl std::fmt::Display) -> Self {
        RngSpec { seed: self.seed, stream: format!("{}/{}", self.stream, label) }
    }

    pub fn rng(&self) -> Sampler {
        let mut inner = ChaCha8Rng::seed_from_u64(self.seed);
        inner.set_stream(fnv1a(self.stream.as_bytes()));
        Sampler { inner, spare: None }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub struct Sampler {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl Sampler {
    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Standard normal draw. Pairs are generated together; the second value
    /// is cached for the next call.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.gaussian();
        c(re, self.gaussian())
    }

    /// Uniformly random unit vector in C^n.
    pub fn unit_vector(&mut self, n: usize) -> DVector<C64> {
        let v = DVector::from_fn(n, |_, _| self.complex_gaussian());
        let norm = v.norm();
        v.unscale(norm)
    }
}

/// ρ = X X† / tr[X X†] with i.i.d. complex normal X.
pub fn ginibre_state(dims: Dims, rng: &mut Sampler) -> QuantumState {
    let n = dims.total();
    let x = CMat::from_fn(n, n, |_, _| rng.complex_gaussian());
    let w = &x * x.adjoint();
    let tr = w.trace().re;
    QuantumState::new(dims, hermitian_part(&w.unscale(tr))).expect("Ginibre sample is a valid state")
}

/// Random pure product state |φ⟩⊗|ψ⟩.
pub fn random_product_pure(dims: Dims, rng: &mut Sampler) -> QuantumState {
    let phi = rng.unit_vector(dims.a);
    let psi = rng.unit_vector(dims.b);
    QuantumState::new(dims, projector(&phi.kronecker(&psi))).expect("pure product state")
}

/// Convex mixture of `terms` random pure product states with uniform-simplex weights.
pub fn random_separable(dims: Dims, terms: usize, rng: &mut Sampler) -> QuantumState {
    let w: Vec<f64> = (0..terms.max(1)).map(|_| -rng.uniform().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut rho = CMat::zeros(dims.total(), dims.total());
    for wk in w {
        rho += random_product_pure(dims, rng).matrix().scale(wk / total);
    }
    QuantumState::new(dims, hermitian_part(&rho)).expect("separable mixture")
}

/// V = Σ v_ji σ_a^i ⊗ σ_b^j with standard normal v_ji, plus normal local
/// Bloch coefficients when `include_local`.
pub fn random_hamiltonian(dims: Dims, include_local: bool, rng: &mut Sampler) -> BipartiteHamiltonian {
    let ga = gpo_basis(dims.a).expect("dims >= 2");
    let gb = gpo_basis(dims.b).expect("dims >= 2");
    let mut v = CMat::zeros(dims.total(), dims.total());
    for sa in &ga.elements {
        for sb in &gb.elements {
            v += kron(sa, sb).scale(rng.gaussian());
        }
    }
    let (h_a, h_b) = if include_local {
        let xa: Vec<f64> = (0..ga.len()).map(|_| rng.gaussian()).collect();
        let xb: Vec<f64> = (0..gb.len()).map(|_| rng.gaussian()).collect();
        (ga.combine(&xa), gb.combine(&xb))
    } else {
        (CMat::zeros(dims.a, dims.a), CMat::zeros(dims.b, dims.b))
    };
    BipartiteHamiltonian::new(dims, h_a, h_b, v).expect("GPO construction is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] =
        [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn vector(self) -> DVector<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = match self {
            BellState::PhiPlus => [h, 0.0, 0.0, h],
            BellState::PhiMinus => [h, 0.0, 0.0, -h],
            BellState::PsiPlus => [0.0, h, h, 0.0],
            BellState::PsiMinus => [0.0, h, -h, 0.0],
        };
        DVector::from_iterator(4, v.iter().map(|&x| c(x, 0.0)))
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi_plus",
            BellState::PhiMinus => "phi_minus",
            BellState::PsiPlus => "psi_plus",
            BellState::PsiMinus => "psi_minus",
        }
    }
}

impl std::str::FromStr for BellState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BellState::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown Bell state `{s}`")))
    }
}

/// (1 − p) 1/4 + p |ψ⟩⟨ψ| for a Bell state ψ.
pub fn werner_state(p: f64, bell: BellState) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("Werner visibility {p} outside [0, 1]")));
    }
    let rho = identity(4).scale((1.0 - p) / 4.0) + projector(&bell.vector()).scale(p);
    QuantumState::new(Dims::qubits(), rho)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum NamedHamiltonian {
    /// ω Σ_j σ_a^j ⊗ σ_b^j over the GPO basis of C^d.
    Antiferromagnetic { omega: f64, d: usize },
    /// ½ω_a σ^z_a + ½ω_b σ^z_b + ½g(σ^x_a σ^x_b + σ^y_a σ^y_b).
    Flipflop { omega_a: f64, omega_b: f64, g: f64 },
    /// Diagonal two-qubit Hamiltonian with eigenvectors |00⟩, |11⟩, |10⟩, |01⟩
    /// carrying energies E_0 < E_1 < E_2 ≤ E_3.
    BellDiagonal { energies: [f64; 4] },
}

impl NamedHamiltonian {
    pub fn build(&self) -> Result<BipartiteHamiltonian> {
        match *self {
            NamedHamiltonian::Antiferromagnetic { omega, d } => antiferromagnetic(omega, d),
            NamedHamiltonian::Flipflop { omega_a, omega_b, g } => Ok(flipflop(omega_a, omega_b, g)),
            NamedHamiltonian::BellDiagonal { energies } => bell_diagonal(energies),
        }
    }
}

pub fn named_hamiltonian(name: &NamedHamiltonian) -> Result<BipartiteHamiltonian> {
    name.build()
}

pub fn antiferromagnetic(omega: f64, d: usize) -> Result<BipartiteHamiltonian> {
    let g = gpo_basis(d)?;
    let dims = Dims::new(d, d)?;
    let mut v = CMat::zeros(d * d, d * d);
    for s in &g.elements {
        v += kron(s, s).scale(omega);
    }
    BipartiteHamiltonian::new(dims, CMat::zeros(d, d), CMat::zeros(d, d), v)
}

pub fn flipflop(omega_a: f64, omega_b: f64, g: f64) -> BipartiteHamiltonian {
    let p = gpo_basis(2).expect("qubit basis");
    let (x, y, z) = (&p.elements[0], &p.elements[1], &p.elements[2]);
    let v = (kron(x, x) + kron(y, y)).scale(0.5 * g);
    BipartiteHamiltonian::new(Dims::qubits(), z.scale(0.5 * omega_a), z.scale(0.5 * omega_b), v)
        .expect("flip-flop construction is valid")
}

pub fn bell_diagonal(energies: [f64; 4]) -> Result<BipartiteHamiltonian> {
    let [e0, e1, e2, e3] = energies;
    if !(e0 < e1 && e1 < e2 && e2 <= e3) {
        return Err(Error::InvalidParameter(format!(
            "energies must satisfy E0 < E1 < E2 <= E3, got {energies:?}"
        )));
    }
    // Computational index: |00⟩=0, |01⟩=1, |10⟩=2, |11⟩=3.
    let diag = [e0, e3, e2, e1];
    let h = CMat::from_diagonal(&DVector::from_iterator(4, diag.iter().map(|&e| c(e, 0.0))));
    BipartiteHamiltonian::from_total(Dims::qubits(), &h)
}

/// The n-th eigenvector |E_n⟩ of [`bell_diagonal`] as a computational basis index.
pub fn bell_diagonal_level(n: usize) -> usize {
    [0, 3, 2, 1][n]
}

/// Two-qubit Bloch data with T = −η·1, R_a = 0 and the given R_b.
pub fn isotropic_correlation_bloch(eta: f64, r_b: [f64; 3]) -> crate::bloch::StateBloch {
    crate::bloch::StateBloch {
        dims: Dims::qubits(),
        r_a: crate::linalg::RVec::zeros(3),
        r_b: crate::linalg::RVec::from_row_slice(&r_b),
        t_mat: crate::linalg::RMat::identity(3, 3) * -eta,
    }
}

/// Physical range of η for [`isotropic_correlation_bloch`] with the given
/// R_b, located by bisection on the eigenvalue PSD test.
pub fn isotropic_correlation_range(r_b: [f64; 3]) -> Result<(f64, f64)> {
    let physical = |eta: f64| -> Result<bool> {
        let rho = crate::bloch::reconstruct_state(&isotropic_correlation_bloch(eta, r_b))?;
        Ok(crate::linalg::min_eigenvalue(&rho) >= 0.0)
    };
    if !physical(0.0)? {
        return Err(Error::InvalidParameter(format!("R_b = {r_b:?} is unphysical even at η = 0")));
    }
    let edge = |outside: f64| -> Result<f64> {
        let (mut inside, mut out) = (0.0, outside);
        for _ in 0..200 {
            let mid = 0.5 * (inside + out);
            if physical(mid)? {
                inside = mid;
            } else {
                out = mid;
            }
        }
        Ok(inside)
    };
    Ok((edge(-2.0)?, edge(2.0)?))
}

/// Instance with V = diag(v_diag), local field h_b on B only, and the state
/// of [`isotropic_correlation_bloch`].
pub fn egoistic_gap_instance(
    eta: f64,
    r_b: [f64; 3],
    h_b: [f64; 3],
    v_diag: [f64; 3],
) -> Result<(QuantumState, BipartiteHamiltonian)> {
    let rho = crate::bloch::reconstruct_state(&isotropic_correlation_bloch(eta, r_b))?;
    let state = QuantumState::new(Dims::qubits(), rho)?;
    let hb = crate::bloch::HamiltonianBloch {
        dims: Dims::qubits(),
        offset: 0.0,
        h_a: crate::linalg::RVec::zeros(3),
        h_b: crate::linalg::RVec::from_row_slice(&h_b),
        v_mat: crate::linalg::RMat::from_diagonal(&crate::linalg::RVec::from_row_slice(&v_diag)),
    };
    let ham = BipartiteHamiltonian::from_total(Dims::qubits(), &crate::bloch::reconstruct_hamiltonian(&hb)?)?;
    Ok((state, ham))
}
