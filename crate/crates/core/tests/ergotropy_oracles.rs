mod common;

use common::{pairing_extremes, random_instance};
use parergo::ergotropy::{global_capacity, global_ergotropy, ergotropy_of, spectral_width};
use parergo::linalg::{hermitian_eigenvalues, trace_product};
use parergo::sampling::{antiferromagnetic, werner_state, BellState};
use parergo::Dims;

#[test]
fn global_quantities_match_pairing_brute_force() {
    for k in 0..200 {
        let (rho, ham) = random_instance(Dims::qubits(), k % 2 == 0, "oracle/global", k);
        let h = ham.total();
        let r: Vec<f64> = hermitian_eigenvalues(rho.matrix()).iter().copied().collect();
        let e: Vec<f64> = hermitian_eigenvalues(&h).iter().copied().collect();
        let energy = trace_product(rho.matrix(), &h).re;
        let (lo, hi) = pairing_extremes(&r, &e);
        let erg = global_ergotropy(&rho, &ham).unwrap().value;
        let cap = global_capacity(&rho, &ham).unwrap();
        assert!((erg - (energy - lo)).abs() < 1e-9, "instance {k}: {erg} vs {}", energy - lo);
        assert!((cap - (hi - lo)).abs() < 1e-9, "instance {k}: {cap} vs {}", hi - lo);
    }
}

#[test]
fn passive_state_reaches_the_minimum() {
    let (rho, ham) = random_instance(Dims::new(2, 3).unwrap(), true, "oracle/passive", 0);
    let res = global_ergotropy(&rho, &ham).unwrap();
    let h = ham.total();
    let before = trace_product(rho.matrix(), &h).re;
    let after = trace_product(res.passive_state.matrix(), &h).re;
    assert!((before - after - res.value).abs() < 1e-10);
    let moved = &res.optimal_unitary * rho.matrix() * res.optimal_unitary.adjoint();
    assert!((trace_product(&moved, &h).re - after).abs() < 1e-10);
}

#[test]
fn werner_antiferromagnet_global_values() {
    let ham = antiferromagnetic(1.0, 2).unwrap();
    assert!((spectral_width(&ham) - 4.0).abs() < 1e-12);
    for p in [0.0, 0.3, 1.0] {
        let rho = werner_state(p, BellState::PhiPlus).unwrap();
        // Φ+ sits at E = ω in the triplet; the singlet at −3ω is the ground state.
        assert!((global_ergotropy(&rho, &ham).unwrap().value - 4.0 * p).abs() < 1e-10);
        assert!((global_capacity(&rho, &ham).unwrap() - 4.0 * p).abs() < 1e-10);
    }
}

#[test]
fn ergotropy_of_diagonal_pair() {
    let rho = parergo::linalg::CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        parergo::linalg::c(0.2, 0.0),
        parergo::linalg::c(0.8, 0.0),
    ]));
    let h = parergo::linalg::CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        parergo::linalg::c(0.0, 0.0),
        parergo::linalg::c(1.0, 0.0),
    ]));
    assert!((ergotropy_of(&rho, &h).unwrap() - 0.6).abs() < 1e-12);
}
