//! Bounds on the parallel ergotropy and parallel capacity of two-party
//! quantum batteries.
//!
//! Parallel ergotropy is the work extractable from ρ_ab with product
//! unitaries U_a ⊗ U_b. It sits between the local ergotropies and the global
//! ergotropy, and this crate brackets it from both sides:
//!
//! * [`direct`] optimizes over local unitaries (a lower bound, and the
//!   egoistic one-agent-at-a-time strategies);
//! * [`analytic`] gives singular-value upper bounds when the marginals are
//!   maximally mixed or the Hamiltonian has no local terms;
//! * [`choi`] relaxes product unitaries to locally unital PPT channels
//!   and solves the resulting SDP with the solver in [`sdp`];
//! * [`ergotropy`] has the global quantities by spectral rearrangement.
//!
//! [`witness`] compares parallel capacity against the ceiling reachable
//! by product states, and [`experiment`] drives reproducible sweeps whose
//! output files embed their own configuration.
//!
//! The examples directory has one program per capability:
//!
//! | example | shows |
//! |---|---|
//! | `werner_closed_form` | Werner states and the antiferromagnet, all estimators |
//! | `flipflop_sweep` | the flip-flop sweep with SDP, analytic and direct bounds |
//! | `random_qutrit_compare` | SDP versus analytic tightness on random instances |
//! | `cooperation_gap` | zero local ergotropy with unit parallel ergotropy |
//! | `egoistic_strategies` | sequential agents falling short of cooperation |
//! | `witness_thresholds` | capacity and fluctuation witnesses on Werner states |
//! | `sdp_toy` | the interior-point solver on a small problem and SDPA export |
//! | `choi_channels` | Choi operators, unitality and PPT checks |
//! | `bloch_decomposition` | generalized Pauli coordinates of states and Hamiltonians |
//!
//! ```
//! use parergo::{analytic, direct, sampling};
//!
//! let ham = sampling::antiferromagnetic(1.0, 2).unwrap();
//! let rho = sampling::werner_state(0.5, sampling::BellState::PhiPlus).unwrap();
//! let upper = analytic::pe_upper_bound_lmm(&rho, &ham).unwrap().value;
//! let lower = direct::pe_lower_bound(&rho, &ham, &direct::DirectOptions::default()).unwrap().value;
//! assert!((upper - 2.0).abs() < 1e-9 && (lower - 2.0).abs() < 1e-6);
//! ```

pub mod analytic;
pub mod bloch;
pub mod choi;
pub mod direct;
pub mod ergotropy;
pub mod error;
pub mod experiment;
pub mod gpo;
pub mod io;
pub mod linalg;
pub mod optimize;
pub mod sampling;
pub mod sdp;
pub mod state;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use state::{BipartiteHamiltonian, Dims, QuantumState, Subsystem};
