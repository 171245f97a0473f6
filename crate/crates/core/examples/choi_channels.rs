//! Choi operators of product unitaries pass the unitality and PPT checks of
//! the relaxation; a non-unital amplitude-damping factor does not.

use parergo::choi::{choi_of_kraus, choi_of_product_unitary, choi_of_unitary, ChoiOperator};
use parergo::direct::LocalUnitaryParams;
use parergo::linalg::{c, identity, kron, CMat};
use parergo::sampling::RngSpec;
use parergo::{Dims, Subsystem};

fn amplitude_damping_on_a(gamma: f64) -> parergo::Result<ChoiOperator> {
    let k0 = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - gamma).sqrt(), 0.0)]);
    let k1 = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(gamma.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let kraus: Vec<CMat> = [k0, k1].iter().map(|k| kron(k, &identity(2))).collect();
    choi_of_kraus(Dims::qubits(), &kraus)
}

fn main() -> parergo::Result<()> {
    let dims = Dims::qubits();
    let id = choi_of_unitary(dims, &identity(4))?;
    println!("identity channel: {:?}", id.checks());

    let mut rng = RngSpec::new(7, "example/choi").rng();
    let ua = LocalUnitaryParams::random(2, &mut rng).unitary();
    let ub = LocalUnitaryParams::random(2, &mut rng).unitary();
    let j = choi_of_product_unitary(&ua, &ub)?;
    println!("random product unitary: worst violation {:.2e}, purity {:.6}", j.checks().worst_violation(), j.purity());

    let damp = amplitude_damping_on_a(0.3)?;
    println!(
        "amplitude damping on A: unitality residual A {:.3e}, direct form {:.3e}, B {:.3e}",
        damp.local_unitality_residual(Subsystem::A),
        damp.local_unitality_residual_direct(Subsystem::A),
        damp.local_unitality_residual(Subsystem::B),
    );
    Ok(())
}
