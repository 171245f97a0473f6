//! Choi-operator relaxation of parallel ergotropy.
//!
//! A bipartite channel Λ is represented by J = Σ_{μν} |μ⟩⟨ν| ⊗ Λ(|μ⟩⟨ν|) on
//! in_a ⊗ in_b ⊗ out_a ⊗ out_b (in that factor order), so that
//! tr[Λ(ρ) H] = tr[J (ρᵀ ⊗ H)] with ρᵀ taken in the computational basis.
//!
//! The SDP variable is parametrized in the orthonormal product basis
//! E = Q_μ ⊗ Q_ν ⊗ Q_κ ⊗ Q_λ with Q_0 = 1/√d and Q_j = σ_j/√2. In that basis
//! trace preservation fixes every coefficient with (κ, λ) = (0, 0), and local
//! unitality on A (on B) forces the coefficients with μ = 0, κ ≠ 0
//! (ν = 0, λ ≠ 0) to vanish. The remaining coefficients are free, the
//! constant part is J_0 = 1/(d_a d_b), and positivity of J and of its partial
//! transposes over (in_a, out_a) and (in_b, out_b) are the only cone
//! constraints left.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ergotropy::global_ergotropy;
use crate::gpo::gpo_basis;
use crate::linalg::{
    c, hermitian_eigenvalues, identity, kron, max_abs, partial_trace_factors, partial_transpose_factors,
    permute_factors, trace_product, unitarity_residual, CMat, C64,
};
use crate::sdp::{realify_sparse, solve, Constraint, SdpOptions, SdpProblem, SdpSolution, SdpStatus, SparseSym};
use crate::state::{check_same_dims, energy_direct, BipartiteHamiltonian, Dims, QuantumState, Subsystem};
use crate::tol;

const IN_A: usize = 0;
const IN_B: usize = 1;
const OUT_A: usize = 2;
const OUT_B: usize = 3;

#[derive(Debug, Clone)]
pub struct ChoiOperator {
    pub dims: Dims,
    pub matrix: CMat,
}

impl ChoiOperator {
    pub fn factor_dims(&self) -> [usize; 4] {
        [self.dims.a, self.dims.b, self.dims.a, self.dims.b]
    }

    /// Λ(ρ) = Tr_in[J (ρᵀ ⊗ 1)].
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        let n = self.dims.total();
        let lifted = &self.matrix * kron(&rho.transpose(), &identity(n));
        partial_trace_factors(&lifted, &self.factor_dims(), &[IN_A, IN_B])
    }

    pub fn trace_preservation_residual(&self) -> f64 {
        let r = partial_trace_factors(&self.matrix, &self.factor_dims(), &[OUT_A, OUT_B]).expect("consistent dims");
        max_abs(&(r - identity(self.dims.total())))
    }

    /// ‖Tr_{in_i} J − Tr_{in_i,out_i} J ⊗ 1_{out_i}/d_i‖_max.
    pub fn local_unitality_residual(&self, which: Subsystem) -> f64 {
        let fd = self.factor_dims();
        let (inp, out) = match which {
            Subsystem::A => (IN_A, OUT_A),
            Subsystem::B => (IN_B, OUT_B),
        };
        let d = self.dims.of(which);
        let lhs = partial_trace_factors(&self.matrix, &fd, &[inp]).expect("consistent dims");
        let both = partial_trace_factors(&self.matrix, &fd, &[inp, out]).expect("consistent dims");
        // Remaining factors after tracing `inp`, in order; `out` sits among them.
        let rest: Vec<usize> = (0..4).filter(|&k| k != inp).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&k| fd[k]).collect();
        // kron(both, 1/d) has factor order (rest without out) + out.
        let appended = kron(&both, &identity(d).unscale(d as f64));
        let without: Vec<usize> = rest.iter().copied().filter(|&k| k != out).collect();
        let mut order = without.clone();
        order.push(out);
        let perm: Vec<usize> = rest.iter().map(|k| order.iter().position(|o| o == k).expect("present")).collect();
        let order_dims: Vec<usize> = order.iter().map(|&k| fd[k]).collect();
        let rhs = permute_factors(&appended, &order_dims, &perm).expect("consistent dims");
        debug_assert_eq!(rhs.nrows(), rest_dims.iter().product::<usize>());
        max_abs(&(lhs - rhs))
    }

    /// Residual of Λ(1_i ⊗ X) = 1_i ⊗ X' over the matrix units X of the
    /// other subsystem.
    pub fn local_unitality_residual_direct(&self, which: Subsystem) -> f64 {
        let dims = self.dims;
        let other = which.other();
        let (d, e) = (dims.of(which), dims.of(other));
        let mut worst: f64 = 0.0;
        for j in 0..e {
            for k in 0..e {
                let mut unit = CMat::zeros(e, e);
                unit[(j, k)] = c(1.0, 0.0);
                let input = crate::state::embed_local(&unit, dims, other);
                let output = self.apply(&input).expect("consistent dims");
                let reduced = crate::state::partial_trace(&output, dims, which).expect("consistent dims");
                let expected = crate::state::embed_local(&reduced.unscale(d as f64), dims, other);
                worst = worst.max(max_abs(&(output - expected)));
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }

    /// Smallest eigenvalue of the partial transpose over (in_i, out_i).
    pub fn ppt_min_eigenvalue(&self, which: Subsystem) -> f64 {
        let f = match which {
            Subsystem::A => [IN_A, OUT_A],
            Subsystem::B => [IN_B, OUT_B],
        };
        let pt = partial_transpose_factors(&self.matrix, &self.factor_dims(), &f).expect("consistent dims");
        hermitian_eigenvalues(&pt)[0]
    }

    /// tr[(J / tr J)²], between 1/(d_a d_b)² and 1.
    pub fn purity(&self) -> f64 {
        let t = self.matrix.trace().re;
        trace_product(&self.matrix, &self.matrix).re / (t * t)
    }

    pub fn checks(&self) -> ChoiChecks {
        ChoiChecks {
            min_eigenvalue: self.min_eigenvalue(),
            trace_preservation: self.trace_preservation_residual(),
            local_unitality_a: self.local_unitality_residual(Subsystem::A),
            local_unitality_b: self.local_unitality_residual(Subsystem::B),
            ppt_a: self.ppt_min_eigenvalue(Subsystem::A),
            ppt_b: self.ppt_min_eigenvalue(Subsystem::B),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChoiChecks {
    pub min_eigenvalue: f64,
    pub trace_preservation: f64,
    pub local_unitality_a: f64,
    pub local_unitality_b: f64,
    pub ppt_a: f64,
    pub ppt_b: f64,
}

impl ChoiChecks {
    /// Largest violation among all constraints of the relaxation.
    pub fn worst_violation(&self) -> f64 {
        [
            (-self.min_eigenvalue).max(0.0),
            self.trace_preservation,
            self.local_unitality_a,
            self.local_unitality_b,
            (-self.ppt_a).max(0.0),
            (-self.ppt_b).max(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// J = |Ω⟩⟨Ω| with |Ω⟩ = Σ_μ |μ⟩ ⊗ (U_a ⊗ U_b)|μ⟩.
pub fn choi_of_product_unitary(u_a: &CMat, u_b: &CMat) -> Result<ChoiOperator> {
    for u in [u_a, u_b] {
        let r = unitarity_residual(u);
        if r > tol::UNITARY {
            return Err(Error::NotUnitary(r));
        }
    }
    let dims = Dims::new(u_a.nrows(), u_b.nrows())?;
    choi_of_unitary(dims, &kron(u_a, u_b))
}

/// Choi operator of ρ ↦ U ρ U† for any unitary on A⊗B.
pub fn choi_of_unitary(dims: Dims, u: &CMat) -> Result<ChoiOperator> {
    choi_of_kraus(dims, std::slice::from_ref(u))
}

/// Choi operator of ρ ↦ Σ_k K_k ρ K_k†. Trace preservation is not checked.
pub fn choi_of_kraus(dims: Dims, kraus: &[CMat]) -> Result<ChoiOperator> {
    let n = dims.total();
    let mut matrix = CMat::zeros(n * n, n * n);
    for k in kraus {
        if k.nrows() != n || k.ncols() != n {
            return Err(Error::DimensionMismatch(format!("Kraus operator must be {n}x{n}")));
        }
        let mut omega = nalgebra::DVector::<C64>::zeros(n * n);
        for mu in 0..n {
            for out in 0..n {
                omega[mu * n + out] = k[(out, mu)];
            }
        }
        matrix += &omega * omega.adjoint();
    }
    Ok(ChoiOperator { dims, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PptBlocks {
    /// One block per subsystem.
    Both,
    /// Only the transpose over (in_a, out_a). J^{T_B} is the full transpose
    /// of J^{T_A}, so the spectra agree and the optimum is unchanged.
    Single,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChoiSdpOptions {
    /// Level of the symmetric-extension hierarchy; only 0 (PPT) is supported.
    pub dps_level: u32,
    pub ppt: PptBlocks,
    pub sdp: SdpOptions,
    /// Refuse problems whose Schur complement would exceed this many bytes.
    pub max_schur_bytes: u64,
}

impl Default for ChoiSdpOptions {
    fn default() -> Self {
        ChoiSdpOptions { dps_level: 0, ppt: PptBlocks::Single, sdp: SdpOptions::default(), max_schur_bytes: 4 << 30 }
    }
}

/// The assembled relaxation together with the data needed to map a dual
/// vector back to a Choi operator.
#[derive(Debug, Clone)]
pub struct PeSdp {
    pub dims: Dims,
    pub problem: SdpProblem,
    /// Product-basis label (μ, ν, κ, λ) of each free coordinate, in
    /// constraint order.
    pub coordinates: Vec<[usize; 4]>,
    /// Sparse entries of each free basis element.
    basis: Vec<Vec<(usize, usize, C64)>>,
    /// tr[J_0 (ρᵀ ⊗ H)].
    pub constant: f64,
    /// tr[ρ H].
    pub energy: f64,
}

impl PeSdp {
    /// J = J_0 + Σ_i y_i E_i.
    pub fn choi_from_dual(&self, y: &[f64]) -> ChoiOperator {
        let n = self.dims.total();
        let big = n * n;
        let mut j = identity(big).unscale(n as f64);
        for (entries, &yi) in self.basis.iter().zip(y) {
            for &(p, q, v) in entries {
                j[(p, q)] += v * yi;
            }
        }
        ChoiOperator { dims: self.dims, matrix: crate::linalg::hermitian_part(&j) }
    }
}

/// Per-factor orthonormal basis: entries of Q_0 = 1/√d, Q_j = σ_j/√2 and
/// their transpose signs.
fn factor_basis(d: usize) -> Result<Vec<(Vec<(usize, usize, C64)>, f64)>> {
    let g = gpo_basis(d)?;
    let mut out = vec![((0..d).map(|i| (i, i, c(1.0 / (d as f64).sqrt(), 0.0))).collect(), 1.0)];
    for (s, kind) in g.elements.iter().zip(&g.kinds) {
        let mut e = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if s[(i, j)] != c(0.0, 0.0) {
                    e.push((i, j, s[(i, j)] * std::f64::consts::FRAC_1_SQRT_2));
                }
            }
        }
        out.push((e, kind.transpose_sign()));
    }
    Ok(out)
}

/// Bytes needed by the dense Schur complement and its factor.
pub fn schur_memory_estimate(dims: Dims) -> u64 {
    let m = free_coordinate_count(dims) as u64;
    2 * m * m * 8
}

pub fn free_coordinate_count(dims: Dims) -> usize {
    let (a2, b2) = (dims.a * dims.a, dims.b * dims.b);
    let total = a2 * b2 * a2 * b2;
    let tp = a2 * b2;
    let lu_a = b2 * (a2 - 1) * b2;
    let lu_b = a2 * (b2 - 1) * a2;
    let overlap = (a2 - 1) * (b2 - 1);
    total - tp - lu_a - lu_b + overlap
}

pub fn build_pe_sdp(state: &QuantumState, ham: &BipartiteHamiltonian, opts: &ChoiSdpOptions) -> Result<PeSdp> {
    check_same_dims(state, ham)?;
    if opts.dps_level != 0 {
        return Err(Error::NotImplemented(format!(
            "symmetric-extension level {} (only level 0 is available)",
            opts.dps_level
        )));
    }
    let dims = state.dims();
    let estimate = schur_memory_estimate(dims);
    if dims.a > 4 || dims.b > 4 {
        return Err(Error::SizeRefused {
            reason: format!("local dimensions ({}, {}) exceed 4", dims.a, dims.b),
            estimated_bytes: estimate,
        });
    }
    if estimate > opts.max_schur_bytes {
        return Err(Error::SizeRefused {
            reason: format!("Schur complement exceeds the {}-byte limit", opts.max_schur_bytes),
            estimated_bytes: estimate,
        });
    }
    let n = dims.total();
    let big = n * n;
    let fd = [dims.a, dims.b, dims.a, dims.b];
    let fb: Vec<_> = fd.iter().map(|&d| factor_basis(d)).collect::<Result<_>>()?;
    let k_obj = kron(&state.matrix().transpose(), &ham.total());
    let energy = energy_direct(state, ham)?;
    let constant = k_obj.trace().re / n as f64;

    let strides = [fd[1] * fd[2] * fd[3], fd[2] * fd[3], fd[3], 1];
    let mut coordinates = Vec::new();
    let mut basis = Vec::new();
    let mut constraints = Vec::new();
    let ppt_sign = |idx: &[usize; 4], pair: [usize; 2]| fb[pair[0]][idx[pair[0]]].1 * fb[pair[1]][idx[pair[1]]].1;
    for mu in 0..fb[0].len() {
        for nu in 0..fb[1].len() {
            for ka in 0..fb[2].len() {
                for la in 0..fb[3].len() {
                    if (ka == 0 && la == 0) || (mu == 0 && ka != 0) || (nu == 0 && la != 0) {
                        continue;
                    }
                    let idx = [mu, nu, ka, la];
                    let mut entries = Vec::new();
                    for &(r0, c0, v0) in &fb[0][mu].0 {
                        for &(r1, c1, v1) in &fb[1][nu].0 {
                            for &(r2, c2, v2) in &fb[2][ka].0 {
                                for &(r3, c3, v3) in &fb[3][la].0 {
                                    let p = r0 * strides[0] + r1 * strides[1] + r2 * strides[2] + r3;
                                    let q = c0 * strides[0] + c1 * strides[1] + c2 * strides[2] + c3;
                                    entries.push((p, q, v0 * v1 * v2 * v3));
                                }
                            }
                        }
                    }
                    let tr_ek: f64 = entries.iter().map(|&(p, q, v)| (v * k_obj[(q, p)]).re).sum();
                    let real = realify_sparse(big, &entries);
                    let mut terms = vec![(0, negated(&real, 1.0))];
                    terms.push((1, negated(&real, ppt_sign(&idx, [IN_A, OUT_A]))));
                    if opts.ppt == PptBlocks::Both {
                        terms.push((2, negated(&real, ppt_sign(&idx, [IN_B, OUT_B]))));
                    }
                    constraints.push(Constraint { terms, rhs: -tr_ek });
                    coordinates.push(idx);
                    basis.push(entries);
                }
            }
        }
    }
    let blocks = if opts.ppt == PptBlocks::Both { 3 } else { 2 };
    let mut c0 = SparseSym::identity(2 * big);
    c0.scale(1.0 / n as f64);
    let problem = SdpProblem {
        block_sizes: vec![2 * big; blocks],
        objective: vec![c0; blocks],
        constraints,
    };
    Ok(PeSdp { dims, problem, coordinates, basis, constant, energy })
}

fn negated(a: &SparseSym, sign: f64) -> SparseSym {
    let mut out = a.clone();
    out.scale(-sign);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundSource {
    Sdp,
    GlobalErgotropy,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverDiagnostics {
    pub status: SdpStatus,
    pub iterations: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Smallest eigenvalue over the primal blocks.
    pub min_eig_x: f64,
    /// Smallest eigenvalue over the dual slack blocks.
    pub min_eig_z: f64,
    pub constraints: usize,
    pub blocks: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeSdpReport {
    /// tr[ρH] − tr[J (ρᵀ ⊗ H)] at the returned Choi operator.
    pub upper_bound: f64,
    /// tr[(J/tr J)²].
    pub purity: f64,
    /// Purity times (d_a d_b)², equal to 1 for the completely depolarizing channel.
    pub normalized_purity: f64,
    pub global_ergotropy: f64,
    /// min(upper_bound, global_ergotropy).
    pub usable_bound: f64,
    pub binding: BoundSource,
    pub checks: ChoiChecks,
    pub solver: SolverDiagnostics,
    #[serde(skip)]
    pub choi: ChoiOperator,
}

pub fn pe_sdp_bound(state: &QuantumState, ham: &BipartiteHamiltonian, opts: &ChoiSdpOptions) -> Result<PeSdpReport> {
    let sdp = build_pe_sdp(state, ham, opts)?;
    let sol = solve(&sdp.problem, &opts.sdp)?;
    report_from_solution(state, ham, &sdp, &sol)
}

pub fn report_from_solution(
    state: &QuantumState,
    ham: &BipartiteHamiltonian,
    sdp: &PeSdp,
    sol: &SdpSolution,
) -> Result<PeSdpReport> {
    if !matches!(sol.status, SdpStatus::Optimal | SdpStatus::MaxIterations | SdpStatus::NumericalFailure)
        || !sol.y.iter().all(|v| v.is_finite())
    {
        return Err(Error::Solver(format!(
            "status {:?} after {} iterations (primal residual {:.2e}, dual residual {:.2e}, gap {:.2e})",
            sol.status, sol.iterations, sol.residuals.primal, sol.residuals.dual, sol.residuals.relative_gap
        )));
    }
    if sol.status != SdpStatus::Optimal && sol.residuals.relative_gap > 1e-6 {
        return Err(Error::Solver(format!(
            "status {:?} with relative gap {:.2e} after {} iterations",
            sol.status, sol.residuals.relative_gap, sol.iterations
        )));
    }
    let choi = sdp.choi_from_dual(&sol.y);
    let n = sdp.dims.total();
    let objective = trace_product(&choi.matrix, &kron(&state.matrix().transpose(), &ham.total())).re;
    let upper_bound = sdp.energy - objective;
    let global = global_ergotropy(state, ham)?.value;
    let (usable_bound, binding) =
        if upper_bound <= global { (upper_bound, BoundSource::Sdp) } else { (global, BoundSource::GlobalErgotropy) };
    let purity = choi.purity();
    Ok(PeSdpReport {
        upper_bound,
        purity,
        normalized_purity: purity * (n * n) as f64,
        global_ergotropy: global,
        usable_bound,
        binding,
        checks: choi.checks(),
        solver: SolverDiagnostics {
            status: sol.status,
            iterations: sol.iterations,
            primal_objective: sol.residuals.primal_objective,
            dual_objective: sol.residuals.dual_objective,
            relative_gap: sol.residuals.relative_gap,
            primal_residual: sol.residuals.primal,
            dual_residual: sol.residuals.dual,
            min_eig_x: sol.residuals.min_eig_x,
            min_eig_z: sol.residuals.min_eig_z,
            constraints: sdp.problem.num_constraints(),
            blocks: sdp.problem.block_sizes.len(),
        },
        choi,
    })
}
