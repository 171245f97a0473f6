//! Infeasible-start primal-dual path following with the HKM search direction
//! and Mehrotra predictor-corrector steps.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par, Side};
use nalgebra::Cholesky;
use serde::Serialize;

use super::problem::{Residuals, SdpProblem, SparseSym};
use crate::error::Result;
use crate::linalg::{max_abs_real, symmetric_eigenvalues, RMat};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SdpOptions {
    pub max_iter: usize,
    /// Target relative duality gap.
    pub gap_tol: f64,
    /// Target primal and dual residual (∞-norm, scaled by 1 + data norm).
    pub feas_tol: f64,
    /// Largest fraction of the distance to the boundary taken per step.
    pub step_fraction: f64,
    /// Norm beyond which iterates are declared divergent.
    pub divergence: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { max_iter: 200, gap_tol: 1e-8, feas_tol: 1e-10, step_fraction: 0.98, divergence: 1e12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SdpStatus {
    Optimal,
    /// Stopped at the iteration cap; the last iterate is returned.
    MaxIterations,
    /// The dual objective grows without bound: the primal looks infeasible.
    PrimalInfeasible,
    /// The primal objective decreases without bound: the dual looks infeasible.
    DualInfeasible,
    /// Step lengths collapsed or a factorization failed.
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IterationLog {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: Vec<RMat>,
    pub y: Vec<f64>,
    pub z: Vec<RMat>,
    pub residuals: Residuals,
    pub iterations: usize,
    pub history: Vec<IterationLog>,
}

impl SdpSolution {
    pub fn primal_objective(&self) -> f64 {
        self.residuals.primal_objective
    }
    pub fn dual_objective(&self) -> f64 {
        self.residuals.dual_objective
    }
    pub fn gap(&self) -> f64 {
        self.residuals.relative_gap
    }
    pub fn converged(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

/// One constraint's coefficient inside one block, laid out for the Schur
/// complement.
struct Term {
    con: usize,
    /// Distinct column indices of the coefficient matrix.
    cols: Vec<usize>,
    /// For each entry of `cols`, that column's nonzeros (row, value).
    col_entries: Vec<Vec<(usize, f64)>>,
}

struct BlockPlan {
    n: usize,
    /// Every matrix of the block has the form [[P, −Q], [Q, P]], so only the
    /// left half of W = X A Z⁻¹ is formed.
    complex: bool,
    terms: Vec<Term>,
    /// Contraction entries of every term, flattened: linear index row + col·n
    /// into the stored part of W + Wᵀ, and weight.
    flat_index: Vec<u32>,
    flat_weight: Vec<f64>,
    /// Term t owns flat entries offsets[t]..offsets[t + 1].
    offsets: Vec<usize>,
}

/// Whether `a` is the real form of a complex Hermitian matrix.
fn complex_structured(a: &SparseSym) -> bool {
    if a.dim % 2 != 0 {
        return false;
    }
    let h = a.dim / 2;
    let stored: std::collections::HashMap<(usize, usize), f64> = a.entries().map(|(i, j, v)| ((i, j), v)).collect();
    let get = |i: usize, j: usize| {
        let key = if i <= j { (i, j) } else { (j, i) };
        stored.get(&key).copied().unwrap_or(0.0)
    };
    a.entries().all(|(i, j, v)| {
        let (pi, pj) = ((i + h) % a.dim, (j + h) % a.dim);
        let expected = if (i < h) == (j < h) { v } else { -v };
        get(pi, pj) == expected
    })
}

fn plan(problem: &SdpProblem) -> Vec<BlockPlan> {
    let mut plans: Vec<BlockPlan> = problem
        .block_sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let complex = complex_structured(&problem.objective[k])
                && problem.constraints.iter().all(|c| c.terms.iter().all(|(kk, a)| *kk != k || complex_structured(a)));
            BlockPlan { n, complex, terms: Vec::new(), flat_index: Vec::new(), flat_weight: Vec::new(), offsets: vec![0] }
        })
        .collect();
    for (con, c) in problem.constraints.iter().enumerate() {
        for (k, a) in &c.terms {
            if a.is_empty() {
                continue;
            }
            let n = a.dim;
            let h = n / 2;
            let bp = &mut plans[*k];
            let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
            for (i, j, v) in a.entries() {
                by_col[j].push((i, v));
                if i != j {
                    by_col[i].push((j, v));
                }
                if !bp.complex {
                    bp.flat_index.push((i + j * n) as u32);
                    bp.flat_weight.push(if i == j { 0.5 * v } else { v });
                }
            }
            if bp.complex {
                // tr[A W] = ⟨R, P⟩ + ⟨I, Q⟩ for A = [[R, −I], [I, R]] and
                // W + Wᵀ = [[P, −Q], [Q, P]]; the top-right block of the
                // stored upper triangle holds −I.
                for (i, j, v) in a.entries() {
                    if j < h {
                        bp.flat_index.push((i + j * n) as u32);
                        bp.flat_weight.push(if i == j { v } else { 2.0 * v });
                    } else if i < h && i < j - h {
                        bp.flat_index.push((h + i + (j - h) * n) as u32);
                        bp.flat_weight.push(-2.0 * v);
                    }
                }
            }
            bp.offsets.push(bp.flat_index.len());
            let mut cols = Vec::new();
            let mut col_entries = Vec::new();
            for (j, e) in by_col.into_iter().enumerate() {
                if !e.is_empty() {
                    cols.push(j);
                    col_entries.push(e);
                }
            }
            bp.terms.push(Term { con, cols, col_entries });
        }
    }
    plans
}
fn to_faer(m: &RMat) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Constraints whose W + Wᵀ are contracted together, so that each pass over
/// the flattened coefficient entries serves several rows of M.
const BATCH: usize = 8;

/// Lower triangle of M_ij = Σ_k tr[A_ik X_k A_jk Z_k⁻¹].
fn schur(plans: &[BlockPlan], x: &[RMat], zinv: &[RMat], m: usize) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(m, m);
    for (k, bp) in plans.iter().enumerate() {
        let n = bp.n;
        let h = n / 2;
        let width = if bp.complex { h } else { n };
        let xf = to_faer(&x[k]);
        let zf = to_faer(&zinv[k]);
        let mut wt = Mat::<f64>::zeros(n, width);
        // Needed entries of W + Wᵀ for a batch, interleaved: entry (i, j) of
        // batch member b sits at (i + j·n)·BATCH + b.
        let mut s = vec![0.0; n * width * BATCH];
        for (chunk_index, chunk) in bp.terms.chunks(BATCH).enumerate() {
            let first = chunk_index * BATCH;
            for (b, ti) in chunk.iter().enumerate() {
                let r = ti.cols.len();
                // Xa = X A[:, cols], Zg = Z⁻¹[:width, cols], W = X A Z⁻¹ restricted
                // to its first `width` columns is Xa Zgᵀ.
                let mut xa = Mat::<f64>::zeros(n, r);
                let mut zg = Mat::<f64>::zeros(width, r);
                for (p, (&col, entries)) in ti.cols.iter().zip(&ti.col_entries).enumerate() {
                    let dst = xa.col_mut(p).try_as_col_major_mut().expect("contiguous column").as_slice_mut();
                    for &(q, v) in entries {
                        let src = xf.col(q).try_as_col_major().expect("contiguous column").as_slice();
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += v * s;
                        }
                    }
                    zg.col_mut(p).copy_from(zf.col(col).subrows(0, width));
                }
                matmul(wt.as_mut(), Accum::Replace, xa.as_ref(), zg.as_ref().transpose(), 1.0, Par::Seq);
                if bp.complex {
                    for j in 0..h {
                        let wcol = wt.col(j).try_as_col_major().expect("contiguous column").as_slice();
                        for i in 0..=j {
                            s[(i + j * n) * BATCH + b] = wcol[i] + wt[(j, i)];
                        }
                        for i in 0..j {
                            s[(h + i + j * n) * BATCH + b] = wcol[h + i] - wt[(h + j, i)];
                        }
                    }
                } else {
                    for j in 0..n {
                        let wcol = wt.col(j).try_as_col_major().expect("contiguous column").as_slice();
                        for i in 0..=j {
                            s[(i + j * n) * BATCH + b] = wcol[i] + wt[(j, i)];
                        }
                    }
                }
            }
            let last = first + chunk.len();
            for (tj, term_j) in bp.terms[..last].iter().enumerate() {
                let range = bp.offsets[tj]..bp.offsets[tj + 1];
                let mut acc = [0.0; BATCH];
                for (&idx, &w) in bp.flat_index[range.clone()].iter().zip(&bp.flat_weight[range]) {
                    let base = idx as usize * BATCH;
                    let sv: &[f64; BATCH] = s[base..base + BATCH].try_into().expect("batch width");
                    for b in 0..BATCH {
                        acc[b] += w * sv[b];
                    }
                }
                for (b, ti) in chunk.iter().enumerate() {
                    if first + b >= tj {
                        out[(ti.con, term_j.con)] += acc[b];
                    }
                }
            }
        }
    }
    out
}

/// Projects onto matrices of the form [[P, −Q], [Q, P]].
fn complex_projection(m: &mut RMat) {
    let h = m.nrows() / 2;
    for j in 0..h {
        for i in 0..h {
            let p = 0.5 * (m[(i, j)] + m[(h + i, h + j)]);
            let q = 0.5 * (m[(h + i, j)] - m[(i, h + j)]);
            m[(i, j)] = p;
            m[(h + i, h + j)] = p;
            m[(h + i, j)] = q;
            m[(i, h + j)] = -q;
        }
    }
}

fn frob_dot(a: &RMat, b: &RMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn sym(m: RMat) -> RMat {
    (&m + m.transpose()) * 0.5
}

/// Largest α ≤ 1/fraction-free bound with X + α ΔX ⪰ 0, given chol(X) = L Lᵀ.
fn max_step(l: &RMat, dx: &RMat) -> f64 {
    let linv_dx = l.solve_lower_triangular(dx).expect("nonsingular factor");
    let s = l.solve_lower_triangular(&linv_dx.transpose()).expect("nonsingular factor");
    let lam = symmetric_eigenvalues(&s)[0];
    if lam >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lam
    }
}

struct Direction {
    dx: Vec<RMat>,
    dy: Vec<f64>,
    dz: Vec<RMat>,
}

pub fn solve(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let nb = problem.block_sizes.len();
    let m = problem.num_constraints();
    let plans = plan(problem);
    let c_dense: Vec<RMat> = problem.objective.iter().map(|c| c.to_dense()).collect();
    let b: Vec<f64> = problem.constraints.iter().map(|c| c.rhs).collect();
    let b_norm = b.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let c_norm = problem.objective.iter().fold(0.0_f64, |a, c| a.max(c.max_abs()));
    let n_total: usize = problem.block_sizes.iter().sum();

    // Identity-based start scaled to the data.
    let mut x: Vec<RMat> = Vec::with_capacity(nb);
    let mut z: Vec<RMat> = Vec::with_capacity(nb);
    for (k, &n) in problem.block_sizes.iter().enumerate() {
        let mut xi = 10.0_f64.max((n as f64).sqrt());
        let mut eta = xi.max(problem.objective[k].frobenius());
        for con in &problem.constraints {
            for (kk, a) in &con.terms {
                if *kk == k {
                    let fa = a.frobenius();
                    xi = xi.max(n as f64 * con.rhs.abs() / (1.0 + fa));
                    eta = eta.max(fa);
                }
            }
        }
        x.push(RMat::identity(n, n) * xi);
        z.push(RMat::identity(n, n) * eta);
    }
    let mut y = vec![0.0; m];
    let mut history = Vec::new();
    let mut status = SdpStatus::MaxIterations;
    let mut stalled = 0;

    let mut iter = 0;
    loop {
        let ax = problem.apply(&x);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, a)| bi - a).collect();
        let aty = problem.apply_adjoint(&y);
        let rd: Vec<RMat> = (0..nb).map(|k| &c_dense[k] - &z[k] - &aty[k]).collect();
        let pobj: f64 = (0..nb).map(|k| frob_dot(&c_dense[k], &x[k])).sum();
        let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let rp_norm = rp.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let rd_norm = rd.iter().fold(0.0_f64, |a, r| a.max(max_abs_real(r)));
        let mu = (0..nb).map(|k| frob_dot(&x[k], &z[k])).sum::<f64>() / n_total as f64;

        if gap <= opts.gap_tol
            && rp_norm <= opts.feas_tol * (1.0 + b_norm)
            && rd_norm <= opts.feas_tol * (1.0 + c_norm)
        {
            status = SdpStatus::Optimal;
            break;
        }
        if iter >= opts.max_iter {
            break;
        }
        let x_norm = x.iter().fold(0.0_f64, |a, m| a.max(max_abs_real(m)));
        let y_norm = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if y_norm > opts.divergence && dobj > 0.0 {
            status = SdpStatus::PrimalInfeasible;
            break;
        }
        if x_norm > opts.divergence && pobj < 0.0 {
            status = SdpStatus::DualInfeasible;
            break;
        }

        let mut lx = Vec::with_capacity(nb);
        let mut lz = Vec::with_capacity(nb);
        let mut zinv = Vec::with_capacity(nb);
        let mut factor_failed = false;
        for k in 0..nb {
            match (Cholesky::new(x[k].clone()), Cholesky::new(z[k].clone())) {
                (Some(cx), Some(cz)) => {
                    lx.push(cx.l());
                    let mut inv = sym(cz.inverse());
                    if plans[k].complex {
                        complex_projection(&mut inv);
                    }
                    zinv.push(inv);
                    lz.push(cz.l());
                }
                _ => factor_failed = true,
            }
        }
        if factor_failed {
            status = SdpStatus::NumericalFailure;
            break;
        }

        let mut mat = schur(&plans, &x, &zinv, m);
        let diag_max = (0..m).fold(0.0_f64, |a, i| a.max(mat[(i, i)]));
        let mut llt = mat.llt(Side::Lower);
        let mut shift = 1e-14 * diag_max.max(1.0);
        while llt.is_err() && shift < 1e-6 * diag_max.max(1.0) {
            for i in 0..m {
                mat[(i, i)] += shift;
            }
            llt = mat.llt(Side::Lower);
            shift *= 10.0;
        }
        let Ok(llt) = llt else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        // X Rd Z⁻¹, shared by both solves.
        let x_rd_zinv: Vec<RMat> = (0..nb).map(|k| &x[k] * &rd[k] * &zinv[k]).collect();
        let a_xrdz = problem.apply(&x_rd_zinv);

        let direction = |g: &[RMat]| -> Direction {
            // M Δy = r_p − A(G) + A(X R_d Z⁻¹), with G = R_c Z⁻¹.
            let ag = problem.apply(g);
            let mut rhs = Mat::<f64>::from_fn(m, 1, |i, _| rp[i] - ag[i] + a_xrdz[i]);
            use faer::linalg::solvers::Solve;
            llt.solve_in_place(rhs.as_mut());
            let dy: Vec<f64> = (0..m).map(|i| rhs[(i, 0)]).collect();
            let atdy = problem.apply_adjoint(&dy);
            let dz: Vec<RMat> = (0..nb).map(|k| &rd[k] - &atdy[k]).collect();
            let dx: Vec<RMat> = (0..nb).map(|k| sym(&g[k] - &x[k] * &dz[k] * &zinv[k])).collect();
            Direction { dx, dy, dz }
        };
        let steps = |d: &Direction, fraction: f64| -> (f64, f64) {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for k in 0..nb {
                ap = ap.min(max_step(&lx[k], &d.dx[k]));
                ad = ad.min(max_step(&lz[k], &d.dz[k]));
            }
            ((fraction * ap).min(1.0), (fraction * ad).min(1.0))
        };
        // Predictor: R_c = −XZ, so G = −X.
        let g_aff: Vec<RMat> = x.iter().map(|xk| -xk).collect();
        let aff = direction(&g_aff);
        let (ap_aff, ad_aff) = steps(&aff, 1.0);
        let mu_aff = (0..nb)
            .map(|k| frob_dot(&(&x[k] + &aff.dx[k] * ap_aff), &(&z[k] + &aff.dz[k] * ad_aff)))
            .sum::<f64>()
            / n_total as f64;
        // Short predictor steps call for more centering.
        let expon = (3.0 * ap_aff.min(ad_aff).powi(2)).clamp(1.0, 3.0);
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powf(expon);

        // Corrector: R_c = σμI − XZ − ΔX_aff ΔZ_aff.
        let g_cor: Vec<RMat> = (0..nb)
            .map(|k| &zinv[k] * (sigma * mu) - &x[k] - &aff.dx[k] * &aff.dz[k] * &zinv[k])
            .collect();
        let cor = direction(&g_cor);
        // Back off from the boundary after short predictor steps.
        let fraction = opts.step_fraction.min(0.9 + 0.09 * ap_aff.min(ad_aff));
        let (ap, ad) = steps(&cor, fraction);

        for k in 0..nb {
            x[k] = sym(&x[k] + &cor.dx[k] * ap);
            z[k] = sym(&z[k] + &cor.dz[k] * ad);
            if plans[k].complex {
                complex_projection(&mut x[k]);
                complex_projection(&mut z[k]);
            }
        }
        for (yi, dyi) in y.iter_mut().zip(&cor.dy) {
            *yi += ad * dyi;
        }
        iter += 1;
        history.push(IterationLog {
            iteration: iter,
            primal_objective: pobj,
            dual_objective: dobj,
            relative_gap: gap,
            primal_residual: rp_norm,
            dual_residual: rd_norm,
            mu,
            step_primal: ap,
            step_dual: ad,
        });
        if ap.min(ad) < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                status = SdpStatus::NumericalFailure;
                break;
            }
        } else {
            stalled = 0;
        }
    }

    let residuals = problem.residuals(&x, &y, &z);
    Ok(SdpSolution { status, x, y, z, residuals, iterations: iter, history })
}
