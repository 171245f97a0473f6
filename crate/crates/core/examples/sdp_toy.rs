//! The interior-point solver on a two-block problem: the smallest eigenvalue
//! of a symmetric matrix plus a scalar bound, then SDPA export.

use parergo::linalg::RMat;
use parergo::sdp::{solve, write_sdpa, Constraint, SdpOptions, SdpProblem, SparseSym};

fn main() -> parergo::Result<()> {
    // min ⟨C, X⟩ + 2x  s.t.  tr X = 1, x = 0.5, X ⪰ 0, x ≥ 0.
    let c = RMat::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let mut scalar = SparseSym::new(1);
    scalar.push(0, 0, 2.0);
    let mut one = SparseSym::new(1);
    one.push(0, 0, 1.0);
    let problem = SdpProblem {
        block_sizes: vec![3, 1],
        objective: vec![SparseSym::from_dense(&c), scalar],
        constraints: vec![
            Constraint { terms: vec![(0, SparseSym::identity(3))], rhs: 1.0 },
            Constraint { terms: vec![(1, one)], rhs: 0.5 },
        ],
    };
    let sol = solve(&problem, &SdpOptions::default())?;
    println!("status {:?} after {} iterations", sol.status, sol.iterations);
    println!("primal {:.10} dual {:.10}", sol.primal_objective(), sol.dual_objective());
    println!("expected {:.10}", 2.0 - 2f64.sqrt() + 1.0);
    println!("{:#?}", sol.residuals);
    print!("{}", write_sdpa(&problem, "toy problem"));
    Ok(())
}
