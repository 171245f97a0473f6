//! Werner states against the antiferromagnet: the closed form, the
//! singular-value bound and direct optimization agree.

use parergo::analytic::{pe_upper_bound_lmm, werner_pe};
use parergo::direct::{pe_lower_bound, DirectOptions};
use parergo::ergotropy::global_ergotropy;
use parergo::sampling::{antiferromagnetic, werner_state, BellState};

fn main() -> parergo::Result<()> {
    let ham = antiferromagnetic(1.0, 2)?;
    let opts = DirectOptions::default();
    println!("{:>10} {:>5} {:>10} {:>10} {:>10} {:>10}", "bell", "p", "closed", "analytic", "direct", "global");
    for bell in BellState::ALL {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = werner_state(p, bell)?;
            println!(
                "{:>10} {:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                bell.name(),
                p,
                werner_pe(p, &ham, bell)?,
                pe_upper_bound_lmm(&rho, &ham)?.value,
                pe_lower_bound(&rho, &ham, &opts)?.value,
                global_ergotropy(&rho, &ham)?.value,
            );
        }
    }
    Ok(())
}
