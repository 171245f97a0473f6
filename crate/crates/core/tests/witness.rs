mod common;

use common::rng;
use parergo::direct::{parallel_capacity_lower, DirectOptions};
use parergo::ergotropy::spectral_width;
use parergo::linalg::{c, trace_product, CMat};
use parergo::sampling::{
    antiferromagnetic, random_hamiltonian, random_separable, werner_state, BellState, Sampler,
};
use parergo::witness::{
    capacity_ceiling, entanglement_gap, fluctuation_criterion, hamiltonian_profile, product_minimum,
    witness_report_with, GapSign, SeesawOptions, WitnessOptions,
};
use parergo::{BipartiteHamiltonian, Dims};

fn bloch_ket(theta: f64, phi: f64) -> [parergo::linalg::C64; 2] {
    [c((theta / 2.0).cos(), 0.0), c(phi.cos(), phi.sin()) * (theta / 2.0).sin()]
}

/// Lowest ⟨φψ|H|φψ⟩ over an n×n Bloch grid on each qubit.
fn grid_minimum(h: &CMat, n: usize) -> f64 {
    use std::f64::consts::PI;
    let kets: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (PI * i as f64 / (n - 1) as f64, 2.0 * PI * j as f64 / n as f64)))
        .map(|(t, p)| bloch_ket(t, p))
        .collect();
    let mut best = f64::INFINITY;
    for a in &kets {
        for b in &kets {
            let v = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
            let mut e = c(0.0, 0.0);
            for p in 0..4 {
                for q in 0..4 {
                    e += v[p].conj() * h[(p, q)] * v[q];
                }
            }
            best = best.min(e.re);
        }
    }
    best
}

fn random_ham(dims: Dims, k: usize) -> BipartiteHamiltonian {
    let mut r: Sampler = rng("witness/ham", k);
    random_hamiltonian(dims, true, &mut r)
}

#[test]
fn antiferromagnet_gap_and_ceiling() {
    let ham = antiferromagnetic(1.0, 2).unwrap();
    let c = capacity_ceiling(&ham, &SeesawOptions::default());
    assert!((c.gap_plus - 2.0).abs() < 1e-8, "{c:?}");
    assert!(c.gap_minus.abs() < 1e-8, "{c:?}");
    assert!((c.ceiling_c1 - 2.0).abs() < 1e-8);
    assert!((c.h_norm_inf - 4.0).abs() < 1e-12);
}

#[test]
fn classical_hamiltonian_has_no_gap() {
    let mut r = rng("witness/classical", 0);
    let mut h = CMat::zeros(4, 4);
    for i in 0..4 {
        h[(i, i)] = c(r.gaussian(), 0.0);
    }
    let ham = BipartiteHamiltonian::from_total(Dims::qubits(), &h).unwrap();
    let ceiling = capacity_ceiling(&ham, &SeesawOptions::default());
    assert!(ceiling.gap_plus.abs() < 1e-9 && ceiling.gap_minus.abs() < 1e-9, "{ceiling:?}");
    assert!((ceiling.ceiling_c1 - spectral_width(&ham)).abs() < 1e-9);
}

#[test]
fn gaps_are_bounded() {
    let opts = SeesawOptions::default();
    for k in 0..40 {
        let dims = if k % 4 == 3 { Dims::new(3, 3).unwrap() } else { Dims::qubits() };
        let ham = random_ham(dims, k);
        let cap = (1.0 - 1.0 / dims.a as f64) * spectral_width(&ham) + 1e-8;
        for sign in [GapSign::Plus, GapSign::Minus] {
            let g = entanglement_gap(&ham, sign, &opts);
            assert!(g >= -1e-10 && g <= cap, "{k} {sign:?}: {g} outside [0, {cap}]");
        }
    }
}

#[test]
fn seesaw_agrees_with_bloch_grid() {
    let opts = SeesawOptions::default();
    for k in 0..6 {
        let ham = random_ham(Dims::qubits(), 100 + k);
        for sign in [GapSign::Plus, GapSign::Minus] {
            let s = match sign {
                GapSign::Plus => 1.0,
                GapSign::Minus => -1.0,
            };
            let grid = grid_minimum(&ham.total().scale(s), 50);
            let found = product_minimum(&ham, sign, &opts);
            assert!(found.energy <= grid + 1e-9, "{k}: {} > {grid}", found.energy);
            assert!(grid - found.energy < 0.02 * spectral_width(&ham), "{k}: {} vs {grid}", found.energy);
            let psi = parergo::linalg::kron(
                &CMat::from_column_slice(2, 1, found.phi.as_slice()),
                &CMat::from_column_slice(2, 1, found.psi.as_slice()),
            );
            let e = trace_product(&(&psi * psi.adjoint()), &ham.total().scale(s)).re;
            assert!((e - found.energy).abs() < 1e-9);
        }
    }
}

#[test]
fn separable_states_are_never_detected() {
    let opts = WitnessOptions { direct: DirectOptions { restarts: 4, ..DirectOptions::default() }, ..WitnessOptions::default() };
    let hams: Vec<_> = std::iter::once(antiferromagnetic(1.0, 2).unwrap())
        .chain((0..4).map(|k| random_ham(Dims::qubits(), 200 + k)))
        .collect();
    let profiles: Vec<_> = hams.iter().map(|h| hamiltonian_profile(h, &opts).unwrap()).collect();
    for k in 0..500 {
        let mut r = rng("witness/separable", k);
        let rho = random_separable(Dims::qubits(), 1 + k % 4, &mut r);
        let i = k % hams.len();
        let rep = witness_report_with(&rho, &hams[i], &profiles[i], &opts).unwrap();
        assert!(!rep.capacity_detects, "{k}: {rep:?}");
        assert!(rep.parallel_capacity <= rep.ceiling_c1 + 1e-7, "{k}: {rep:?}");
        let f = rep.fluctuation.unwrap();
        assert!(f.lhs <= f.rhs + 1e-9, "{k}: {f:?}");
    }
}

#[test]
fn werner_thresholds_are_sharp() {
    let ham = antiferromagnetic(1.0, 2).unwrap();
    let opts = WitnessOptions::default();
    let profile = hamiltonian_profile(&ham, &opts).unwrap();
    let detects = |p: f64| {
        let rho = werner_state(p, BellState::PsiMinus).unwrap();
        let rep = witness_report_with(&rho, &ham, &profile, &opts).unwrap();
        (rep.capacity_detects, rep.fluctuation_detects.unwrap())
    };
    assert_eq!(detects(0.50), (false, false));
    assert_eq!(detects(0.51), (true, false));
    assert_eq!(detects(0.57), (true, false));
    assert_eq!(detects(0.58), (true, true));
    assert_eq!(detects(0.30), (false, false));
}

#[test]
fn werner_capacity_is_linear() {
    let ham = antiferromagnetic(1.0, 2).unwrap();
    let opts = DirectOptions::default();
    for p in [0.0, 0.3, 0.6, 1.0] {
        let rho = werner_state(p, BellState::PsiMinus).unwrap();
        let cap = parallel_capacity_lower(&rho, &ham, &opts).unwrap().value;
        assert!((cap - 4.0 * p).abs() < 1e-6, "{p}: {cap}");
    }
}

#[test]
fn fluctuation_needs_equal_dimensions() {
    let mut r = rng("witness/dims", 0);
    let rho = random_separable(Dims::new(2, 3).unwrap(), 2, &mut r);
    assert!(fluctuation_criterion(&rho).is_err());
}
