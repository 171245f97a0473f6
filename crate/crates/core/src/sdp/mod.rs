//! Semidefinite programming: problem data, a dense interior-point solver,
//! the real embedding of Hermitian data, and a text dump for external tools.

mod dump;
mod problem;
mod realify;
mod solver;

pub use dump::{read_sdpa, write_sdpa};
pub use problem::{Constraint, Residuals, SdpProblem, SparseSym};
pub use realify::{realify, realify_sparse, unrealify};
pub use solver::{solve, IterationLog, SdpOptions, SdpSolution, SdpStatus};
