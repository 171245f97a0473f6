//! Numerical tolerances shared across the crate.

/// Maximum entrywise deviation from Hermiticity accepted on input.
pub const HERMITIAN: f64 = 1e-10;
/// Maximum deviation of a state's trace from one.
pub const TRACE: f64 = 1e-10;
/// Eigenvalues above this floor but below zero are clipped; below it the state is rejected.
pub const EIGEN_FLOOR: f64 = -1e-9;
/// Partial traces of the interaction term must vanish to this precision.
pub const INTERACTION_PTRACE: f64 = 1e-9;
/// Reduced states closer than this to 1/d count as maximally mixed.
pub const LMM: f64 = 1e-9;
/// Local Bloch vectors of the Hamiltonian below this norm count as absent.
pub const NULL_LOCAL: f64 = 1e-12;
/// Relative determinant threshold for the sign split in the analytic bound.
pub const DET_ZERO: f64 = 1e-12;
/// Unitarity residual accepted for user-supplied unitaries.
pub const UNITARY: f64 = 1e-9;
/// Absolute margin a capacity must clear before it counts as a detection.
pub const DETECTION_MARGIN: f64 = 1e-6;
