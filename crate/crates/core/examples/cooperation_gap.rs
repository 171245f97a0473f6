//! Neither agent alone can extract work from |E_1⟩ of a diagonal two-qubit
//! Hamiltonian, but X ⊗ X applied jointly brings it to the ground state.

use parergo::direct::{egoistic_total, local_ergotropy, pe_lower_bound, DirectOptions, StrategyOrder};
use parergo::experiment::{load_state_source, StateSource};
use parergo::linalg::{c, kron, trace_product, CMat};
use parergo::sampling::{bell_diagonal, bell_diagonal_level};
use parergo::Subsystem;

fn main() -> parergo::Result<()> {
    let ham = bell_diagonal([0.0, 1.0, 2.0, 3.0])?;
    let rho = load_state_source(&StateSource::Basis { dims: [2, 2], index: bell_diagonal_level(1) }, 0)?;
    let opts = DirectOptions::default();

    println!("local ergotropy A: {:.3e}", local_ergotropy(&rho, &ham, Subsystem::A, &opts)?.value);
    println!("local ergotropy B: {:.3e}", local_ergotropy(&rho, &ham, Subsystem::B, &opts)?.value);
    for order in [StrategyOrder::AFirst, StrategyOrder::BFirst] {
        println!("{order:?} total: {:.3e}", egoistic_total(&rho, &ham, order, &opts)?.total);
    }
    println!("parallel ergotropy: {:.9}", pe_lower_bound(&rho, &ham, &opts)?.value);

    let x = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let u = kron(&x, &x);
    let h = ham.total();
    let after = &u * rho.matrix() * u.adjoint();
    let work = trace_product(rho.matrix(), &h).re - trace_product(&after, &h).re;
    println!("X⊗X extracts {work}");
    Ok(())
}
