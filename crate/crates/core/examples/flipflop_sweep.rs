//! Werner visibility sweep under the flip-flop Hamiltonian with detuned
//! local fields. The SDP bound sits between the exact parallel ergotropy
//! and the global ergotropy.

use parergo::analytic::pe_upper_bound_lmm;
use parergo::choi::{pe_sdp_bound, ChoiSdpOptions};
use parergo::direct::{pe_lower_bound, DirectOptions};
use parergo::ergotropy::global_ergotropy;
use parergo::experiment::linear_grid;
use parergo::sampling::{flipflop, werner_state, BellState};

fn main() -> parergo::Result<()> {
    let ham = flipflop(1.0, 1.1, 0.33);
    let direct = DirectOptions::default();
    let sdp = ChoiSdpOptions::default();
    println!("{:>5} {:>10} {:>10} {:>10} {:>10} {:>5}", "p", "global", "sdp", "analytic", "direct", "iter");
    for p in linear_grid(0.0, 1.0, 11) {
        let rho = werner_state(p, BellState::PhiPlus)?;
        let s = pe_sdp_bound(&rho, &ham, &sdp)?;
        println!(
            "{:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>5}",
            p,
            global_ergotropy(&rho, &ham)?.value,
            s.upper_bound,
            pe_upper_bound_lmm(&rho, &ham)?.value,
            pe_lower_bound(&rho, &ham, &direct)?.value,
            s.solver.iterations,
        );
    }
    Ok(())
}
