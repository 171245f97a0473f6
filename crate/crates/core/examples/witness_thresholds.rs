//! Parallel capacity and work fluctuations as entanglement witnesses for
//! Werner states under the antiferromagnet.

use parergo::sampling::{antiferromagnetic, werner_state, BellState};
use parergo::witness::{hamiltonian_profile, witness_report_with, WitnessOptions};

fn main() -> parergo::Result<()> {
    let ham = antiferromagnetic(1.0, 2)?;
    let opts = WitnessOptions::default();
    let profile = hamiltonian_profile(&ham, &opts)?;
    let c = profile.ceiling;
    println!(
        "‖H‖ = {:.6}, gaps {:.6} / {:.6}, product ceiling {:.6}, best capacity {:.6}",
        c.h_norm_inf, c.gap_plus, c.gap_minus, c.ceiling_c1, profile.max_capacity
    );
    for p in [0.2, 0.4, 0.5, 0.51, 0.55, 0.57, 0.58, 0.7, 1.0] {
        let w = witness_report_with(&werner_state(p, BellState::PhiPlus)?, &ham, &profile, &opts)?;
        println!(
            "p = {p:.2}: capacity {:.6} detects {:>5}  fluctuation detects {:>5}",
            w.parallel_capacity,
            w.capacity_detects,
            w.fluctuation_detects.unwrap_or(false)
        );
    }
    Ok(())
}
