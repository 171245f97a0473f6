//! Sequential single-agent extraction against the cooperative optimum on a
//! two-qubit family with T = −η·1, R_a = 0 and |R_b| = 1/2.
//!
//! With `--write PATH` the instance is also saved as an instance file.

use parergo::direct::{egoistic_total, DirectOptions, StrategyOrder};
use parergo::io::{HamiltonianFile, InstanceFile, StateFile};
use parergo::sampling::{egoistic_gap_instance, isotropic_correlation_range};

const ETA: f64 = 0.2;
const R_B: [f64; 3] = [0.3, 0.0, 0.4];
const H_B: [f64; 3] = [0.0, 0.0, 1.0];
const V_DIAG: [f64; 3] = [1.0, 2.0, 3.0];

fn main() -> parergo::Result<()> {
    let (lo, hi) = isotropic_correlation_range(R_B)?;
    println!("physical for η in [{lo:.4}, {hi:.4}]");

    let (rho, ham) = egoistic_gap_instance(ETA, R_B, H_B, V_DIAG)?;
    let opts = DirectOptions::default();
    for order in [StrategyOrder::AFirst, StrategyOrder::BFirst, StrategyOrder::Cooperative] {
        let o = egoistic_total(&rho, &ham, order, &opts)?;
        println!("{:?}: first {:.6} second {:.6} total {:.6}", order, o.work_first, o.work_second, o.total);
    }

    let args: Vec<String> = std::env::args().collect();
    if let Some(path) = args.iter().position(|a| a == "--write").and_then(|k| args.get(k + 1)) {
        let file = InstanceFile {
            description: "two-qubit instance where both sequential strategies fall short of cooperation".into(),
            state: StateFile::from_state(&rho),
            hamiltonian: HamiltonianFile::from_hamiltonian(&ham),
            parameters: serde_json::json!({ "eta": ETA, "r_b": R_B, "h_b": H_B, "v_diag": V_DIAG }),
        };
        std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
        println!("wrote {path}");
    }
    Ok(())
}
