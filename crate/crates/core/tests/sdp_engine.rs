mod common;

use common::rng;
use parergo::linalg::{symmetric_eigenvalues, RMat};
use parergo::sdp::{read_sdpa, solve, write_sdpa, Constraint, SdpOptions, SdpProblem, SdpStatus, SparseSym};

fn scalar(v: f64) -> SparseSym {
    let mut s = SparseSym::new(1);
    s.push(0, 0, v);
    s
}

fn random_symmetric(n: usize, label: &str, k: usize) -> RMat {
    let mut r = rng(label, k);
    let g = RMat::from_fn(n, n, |_, _| r.gaussian());
    (&g + g.transpose()) * 0.5
}

/// min ⟨C, X⟩ s.t. tr X = 1 has value λ_min(C).
fn min_eig_problem(c: &RMat) -> SdpProblem {
    let n = c.nrows();
    SdpProblem {
        block_sizes: vec![n],
        objective: vec![SparseSym::from_dense(c)],
        constraints: vec![Constraint { terms: vec![(0, SparseSym::identity(n))], rhs: 1.0 }],
    }
}

/// Two blocks with a coupling constraint, so the Schur complement is not diagonal.
fn coupled_problem(label: &str, k: usize) -> SdpProblem {
    let c1 = random_symmetric(4, label, 2 * k);
    let c2 = random_symmetric(3, label, 2 * k + 1);
    let mut a = random_symmetric(4, label, 1000 + k);
    a += RMat::identity(4, 4) * 0.1;
    SdpProblem {
        block_sizes: vec![4, 3],
        objective: vec![SparseSym::from_dense(&c1), SparseSym::from_dense(&c2)],
        constraints: vec![
            Constraint { terms: vec![(0, SparseSym::identity(4)), (1, SparseSym::identity(3))], rhs: 2.0 },
            Constraint { terms: vec![(0, SparseSym::identity(4))], rhs: 1.0 },
            Constraint { terms: vec![(0, SparseSym::from_dense(&a))], rhs: 0.05 },
        ],
    }
}

#[test]
fn smallest_eigenvalue_problems() {
    for k in 0..10 {
        let c = random_symmetric(5, "sdp/min-eig", k);
        let sol = solve(&min_eig_problem(&c), &SdpOptions::default()).unwrap();
        assert!(sol.converged());
        let want = symmetric_eigenvalues(&c)[0];
        assert!((sol.primal_objective() - want).abs() < 1e-7, "{k}: {} vs {want}", sol.primal_objective());
        assert!((sol.dual_objective() - want).abs() < 1e-7);
    }
}

#[test]
fn trace_one_with_identity_cost() {
    // min tr X s.t. tr X = 1: every feasible point has objective 1.
    let problem = SdpProblem {
        block_sizes: vec![3],
        objective: vec![SparseSym::identity(3)],
        constraints: vec![Constraint { terms: vec![(0, SparseSym::identity(3))], rhs: 1.0 }],
    };
    let sol = solve(&problem, &SdpOptions::default()).unwrap();
    assert!(sol.converged());
    assert!((sol.primal_objective() - 1.0).abs() < 1e-8);
}

#[test]
fn two_block_toy_value() {
    let c = RMat::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let problem = SdpProblem {
        block_sizes: vec![3, 1],
        objective: vec![SparseSym::from_dense(&c), scalar(2.0)],
        constraints: vec![
            Constraint { terms: vec![(0, SparseSym::identity(3))], rhs: 1.0 },
            Constraint { terms: vec![(1, scalar(1.0))], rhs: 0.5 },
        ],
    };
    let sol = solve(&problem, &SdpOptions::default()).unwrap();
    assert!((sol.primal_objective() - (3.0 - 2f64.sqrt())).abs() < 1e-8);
}

#[test]
fn weak_duality_on_feasible_iterates() {
    for k in 0..5 {
        let problem = coupled_problem("sdp/coupled", k);
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        assert!(sol.converged(), "{k}: {:?}", sol.status);
        for log in &sol.history {
            if log.primal_residual < 1e-9 && log.dual_residual < 1e-9 {
                let scale = 1.0 + log.primal_objective.abs();
                assert!(log.primal_objective - log.dual_objective >= -1e-8 * scale, "{k}: {log:?}");
            }
        }
        let r = &sol.residuals;
        assert!(r.primal_objective - r.dual_objective >= -1e-8 * (1.0 + r.primal_objective.abs()));
        assert!(r.min_eig_x >= -1e-9 && r.min_eig_z >= -1e-9);
    }
}

#[test]
fn reported_residuals_match_recomputation() {
    for k in 0..5 {
        let problem = coupled_problem("sdp/residuals", k);
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        let again = problem.residuals(&sol.x, &sol.y, &sol.z);
        assert!((again.primal - sol.residuals.primal).abs() < 1e-10);
        assert!((again.dual - sol.residuals.dual).abs() < 1e-10);
        assert!((again.primal_objective - sol.primal_objective()).abs() < 1e-10);
        assert!((again.dual_objective - sol.dual_objective()).abs() < 1e-10);
        assert!(again.primal < 1e-8 && again.dual < 1e-8);
    }
}

#[test]
fn objective_scaling_scales_the_optimum() {
    for k in 0..5 {
        let base = coupled_problem("sdp/scale", k);
        let mut scaled = base.clone();
        for c in &mut scaled.objective {
            c.scale(10.0);
        }
        let a = solve(&base, &SdpOptions::default()).unwrap().primal_objective();
        let b = solve(&scaled, &SdpOptions::default()).unwrap().primal_objective();
        assert!((b - 10.0 * a).abs() < 1e-6 * (1.0 + b.abs()), "{k}: {b} vs {}", 10.0 * a);
    }
}

#[test]
fn infeasible_primal_is_flagged() {
    let problem = SdpProblem {
        block_sizes: vec![2],
        objective: vec![SparseSym::identity(2)],
        constraints: vec![Constraint { terms: vec![(0, SparseSym::identity(2))], rhs: -1.0 }],
    };
    let sol = solve(&problem, &SdpOptions::default()).unwrap();
    assert_ne!(sol.status, SdpStatus::Optimal);
}

#[test]
fn malformed_problems_are_rejected() {
    let mut p = min_eig_problem(&RMat::identity(2, 2));
    p.constraints[0].terms[0].0 = 3;
    assert!(solve(&p, &SdpOptions::default()).is_err());
    let mut p = min_eig_problem(&RMat::identity(2, 2));
    p.constraints[0].rhs = f64::NAN;
    assert!(p.validate().is_err());
}

#[test]
fn sdpa_round_trip_preserves_the_optimum() {
    for k in 0..3 {
        let problem = coupled_problem("sdp/sdpa", k);
        let text = write_sdpa(&problem, "round trip");
        let back = read_sdpa(&text).unwrap();
        assert_eq!(back.block_sizes, problem.block_sizes);
        assert_eq!(back.num_constraints(), problem.num_constraints());
        assert_eq!(write_sdpa(&back, "round trip"), text);
        let a = solve(&problem, &SdpOptions::default()).unwrap().primal_objective();
        let b = solve(&back, &SdpOptions::default()).unwrap().primal_objective();
        assert!((a - b).abs() < 1e-9);
    }
}
