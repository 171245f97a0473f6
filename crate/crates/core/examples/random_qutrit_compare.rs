//! Ratios of the SDP and singular-value bounds to the direct lower bound on
//! random instances without local Hamiltonian terms.
//!
//! `cargo run --release --example random_qutrit_compare -- [d] [count] [seed]`
//! takes d = 3 and count = 2 by default; one two-qutrit SDP takes a minute or so.

use std::time::Instant;

use parergo::analytic::pe_upper_bound_lmm;
use parergo::choi::{pe_sdp_bound, ChoiSdpOptions};
use parergo::direct::{pe_lower_bound, DirectOptions};
use parergo::experiment::random_compare_instance;
use parergo::Dims;

fn main() -> parergo::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: u64| args.get(k).and_then(|s| s.parse().ok()).unwrap_or(default);
    let d = arg(0, 3) as usize;
    let count = arg(1, 2) as usize;
    let seed = arg(2, 0);
    let dims = Dims::new(d, d)?;

    let mut sdp_tighter = 0;
    for i in 0..count {
        let t = Instant::now();
        let (rho, ham) = random_compare_instance(dims, false, seed, i);
        let lower = pe_lower_bound(&rho, &ham, &DirectOptions::with_seed(seed))?.value;
        let sdp = pe_sdp_bound(&rho, &ham, &ChoiSdpOptions::default())?;
        let analytic = pe_upper_bound_lmm(&rho, &ham)?.value;
        let (rs, ra) = (sdp.upper_bound / lower, analytic / lower);
        if rs < ra {
            sdp_tighter += 1;
        }
        println!(
            "instance {i}: lower {lower:.6}  sdp/lower {rs:.6}  analytic/lower {ra:.6}  ({} iterations, {:.1} s)",
            sdp.solver.iterations,
            t.elapsed().as_secs_f64()
        );
    }
    println!("sdp tighter on {sdp_tighter} of {count}");
    Ok(())
}
