//! Generalized Pauli coordinates of a random two-qutrit state and
//! Hamiltonian; the energy from coordinates matches tr[ρH].

use parergo::bloch::{bloch_decompose, reconstruct_state};
use parergo::gpo::gpo_basis;
use parergo::linalg::max_abs;
use parergo::sampling::{ginibre_state, random_hamiltonian, RngSpec};
use parergo::state::energy_direct;
use parergo::Dims;

fn main() -> parergo::Result<()> {
    let basis = gpo_basis(3)?;
    println!("qutrit basis: {} elements, kinds {:?}", basis.len(), basis.kinds);

    let dims = Dims::new(3, 3)?;
    let mut rng = RngSpec::new(1, "example/bloch").rng();
    let rho = ginibre_state(dims, &mut rng);
    let ham = random_hamiltonian(dims, true, &mut rng);
    let b = bloch_decompose(&rho, &ham)?;
    println!("|R_a| = {:.6}, |R_b| = {:.6}", b.r_a().norm(), b.r_b().norm());
    let sv: Vec<String> = b.t_mat().singular_values().iter().map(|v| format!("{v:.6}")).collect();
    println!("singular values of T: {}", sv.join(" "));
    println!("energy from coordinates {:.12}", b.energy());
    println!("energy from tr[ρH]      {:.12}", energy_direct(&rho, &ham)?);
    let back = reconstruct_state(&b.state)?;
    println!("reconstruction error {:.2e}", max_abs(&(back - rho.matrix())));
    Ok(())
}
