mod common;

use common::{random_instance, rng};
use parergo::analytic::{hypothesis_check, pc_upper_bound, pe_upper_bound_lmm, signed_spectrum, werner_pe, Hypothesis};
use parergo::bloch::{reconstruct_state, StateBloch};
use parergo::direct::{
    egoistic_total, local_ergotropy, parallel_capacity_lower, pe_lower_bound, pe_lower_bound_so3,
    qubit_positivity_polynomials, qubit_state_physicality, DirectOptions, StrategyOrder,
};
use parergo::ergotropy::{global_capacity, global_ergotropy, spectral_width};
use parergo::linalg::{min_eigenvalue, projector, trace_product, CMat, RMat, RVec};
use parergo::sampling::{
    antiferromagnetic, bell_diagonal, bell_diagonal_level, egoistic_gap_instance, flipflop,
    isotropic_correlation_range, random_hamiltonian, werner_state, BellState,
};
use parergo::{Dims, Error, QuantumState, Subsystem};
use proptest::prelude::*;

fn bell_mixture(w: [f64; 4]) -> QuantumState {
    let total: f64 = w.iter().sum();
    let mut rho = CMat::zeros(4, 4);
    for (b, wk) in BellState::ALL.iter().zip(w) {
        rho += projector(&b.vector()).scale(wk / total);
    }
    QuantumState::new(Dims::qubits(), rho).unwrap()
}

#[test]
fn werner_closed_form_matches_both_routes() {
    let ham = antiferromagnetic(1.0, 2).unwrap();
    let opts = DirectOptions::default();
    for bell in BellState::ALL {
        let want = |p: f64| if bell == BellState::PsiMinus { 0.0 } else { 4.0 * p };
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = werner_state(p, bell).unwrap();
            assert!((werner_pe(p, &ham, bell).unwrap() - want(p)).abs() < 1e-10);
            assert!((pe_upper_bound_lmm(&rho, &ham).unwrap().value - want(p)).abs() < 1e-10);
            assert!((pe_lower_bound(&rho, &ham, &opts).unwrap().value - want(p)).abs() < 1e-6);
        }
    }
}

#[test]
fn singular_value_bound_is_exact_for_qubit_bell_mixtures() {
    let opts = DirectOptions::default();
    for k in 0..20 {
        let mut r = rng("bounds/bell-mixture", k);
        let rho = bell_mixture([r.uniform(), r.uniform(), r.uniform(), r.uniform()]);
        let ham = random_hamiltonian(Dims::qubits(), true, &mut r);
        assert_eq!(hypothesis_check(&rho, &ham), Hypothesis::Lmm);
        let bound = pe_upper_bound_lmm(&rho, &ham).unwrap();
        assert!(bound.exact);
        let lower = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        assert!((bound.value - lower).abs() < 1e-6, "instance {k}: {} vs {lower}", bound.value);
        let cap = pc_upper_bound(&rho, &ham).unwrap().value;
        let cap_lower = parallel_capacity_lower(&rho, &ham, &opts).unwrap().value;
        assert!((cap - cap_lower).abs() < 1e-6, "instance {k}: {cap} vs {cap_lower}");
    }
}

#[test]
fn singular_value_bound_is_exact_for_null_local_qubits() {
    let opts = DirectOptions::default();
    for k in 0..20 {
        let (rho, ham) = random_instance(Dims::qubits(), false, "bounds/null-local", k);
        assert!(hypothesis_check(&rho, &ham).holds());
        let bound = pe_upper_bound_lmm(&rho, &ham).unwrap().value;
        let lower = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        let so3 = pe_lower_bound_so3(&rho, &ham, &opts).unwrap();
        assert!((bound - lower).abs() < 1e-6, "instance {k}: {bound} vs {lower}");
        assert!((so3 - lower).abs() < 1e-6, "instance {k}: {so3} vs {lower}");
    }
}

#[test]
fn singular_value_bound_dominates_on_qutrits() {
    let opts = DirectOptions { restarts: 4, ..DirectOptions::default() };
    for k in 0..4 {
        let (rho, ham) = random_instance(Dims::new(3, 3).unwrap(), false, "bounds/qutrit", k);
        let bound = pe_upper_bound_lmm(&rho, &ham).unwrap();
        assert!(!bound.exact);
        let lower = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        assert!(bound.value >= lower - 1e-6, "instance {k}: {} < {lower}", bound.value);
        assert!(bound.value <= global_ergotropy(&rho, &ham).unwrap().value + 1e-6 || bound.value >= lower);
    }
}

#[test]
fn hypothesis_violation_is_reported() {
    let (rho, ham) = random_instance(Dims::qubits(), true, "bounds/violation", 0);
    assert_eq!(hypothesis_check(&rho, &ham), Hypothesis::Neither);
    assert!(matches!(pe_upper_bound_lmm(&rho, &ham), Err(Error::HypothesisViolated(_))));
    let (rho, ham) = random_instance(Dims::new(2, 3).unwrap(), false, "bounds/violation", 1);
    assert!(matches!(pe_upper_bound_lmm(&rho, &ham), Err(Error::InvalidDimension(_))));
}

#[test]
fn determinant_sign_and_singular_values() {
    let m = RMat::from_diagonal(&RVec::from_vec(vec![-3.0, 1.0, 2.0]));
    let s = signed_spectrum(&m).unwrap();
    assert_eq!(s.det_sign, -1);
    assert_eq!(s.singular_values.as_slice(), &[1.0, 2.0, 3.0]);
    let z = RMat::from_diagonal(&RVec::from_vec(vec![0.0, 1.0, 2.0]));
    assert_eq!(signed_spectrum(&z).unwrap().det_sign, 0);
}

#[test]
fn flipflop_werner_direct_matches_analytic() {
    let ham = flipflop(1.0, 1.1, 0.33);
    let opts = DirectOptions::default();
    for p in [0.1, 0.5, 0.9] {
        let rho = werner_state(p, BellState::PhiPlus).unwrap();
        let a = pe_upper_bound_lmm(&rho, &ham).unwrap().value;
        let d = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        assert!((a - 0.33 * p).abs() < 1e-9 && (d - a).abs() < 1e-6, "p={p}: {a} {d}");
    }
}

#[test]
fn cooperation_gap_bell_diagonal() {
    let ham = bell_diagonal([0.0, 1.0, 2.0, 3.0]).unwrap();
    let mut rho = CMat::zeros(4, 4);
    let l = bell_diagonal_level(1);
    rho[(l, l)] = parergo::linalg::c(1.0, 0.0);
    let rho = QuantumState::new(Dims::qubits(), rho).unwrap();
    let opts = DirectOptions::default();
    for s in [Subsystem::A, Subsystem::B] {
        assert!(local_ergotropy(&rho, &ham, s, &opts).unwrap().value.abs() < 1e-9);
    }
    for o in [StrategyOrder::AFirst, StrategyOrder::BFirst] {
        assert!(egoistic_total(&rho, &ham, o, &opts).unwrap().total.abs() < 1e-9);
    }
    assert!((pe_lower_bound(&rho, &ham, &opts).unwrap().value - 1.0).abs() < 1e-6);
    assert!(bell_diagonal([0.0, 2.0, 1.0, 3.0]).is_err());
}

#[test]
fn egoistic_gap_fixture_instance() {
    let (rho, ham) = egoistic_gap_instance(0.2, [0.3, 0.0, 0.4], [0.0, 0.0, 1.0], [1.0, 2.0, 3.0]).unwrap();
    let opts = DirectOptions::default();
    let coop = egoistic_total(&rho, &ham, StrategyOrder::Cooperative, &opts).unwrap().total;
    // (h·R_b) + |h||R_b| + η tr(|V| − V) with V > 0.
    assert!((coop - 0.9).abs() < 1e-6, "{coop}");
    for o in [StrategyOrder::AFirst, StrategyOrder::BFirst] {
        let t = egoistic_total(&rho, &ham, o, &opts).unwrap().total;
        assert!(coop - t > 0.5, "{o:?}: {t}");
    }
}

#[test]
fn isotropic_family_physical_range() {
    let (lo, hi) = isotropic_correlation_range([0.0, 0.0, 0.5]).unwrap();
    // Independent oracle: smallest eigenvalue of the reconstructed matrix.
    let oracle = |eta: f64| {
        let sb = StateBloch {
            dims: Dims::qubits(),
            r_a: RVec::zeros(3),
            r_b: RVec::from_vec(vec![0.0, 0.0, 0.5]),
            t_mat: RMat::identity(3, 3) * -eta,
        };
        min_eigenvalue(&reconstruct_state(&sb).unwrap())
    };
    assert!(oracle(lo + 1e-9) >= -1e-12 && oracle(lo - 1e-6) < 0.0);
    assert!(oracle(hi - 1e-9) >= -1e-12 && oracle(hi + 1e-6) < 0.0);
    assert!((lo - (-0.267591879)).abs() < 1e-8, "{lo}");
    assert!((hi - 0.5).abs() < 1e-12, "{hi}");
}

#[test]
fn capacity_sits_between_ergotropy_and_width() {
    let opts = DirectOptions { restarts: 6, ..DirectOptions::default() };
    for k in 0..10 {
        let (rho, ham) = random_instance(Dims::qubits(), true, "bounds/capacity", k);
        let pe = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        let cp = parallel_capacity_lower(&rho, &ham, &opts).unwrap().value;
        assert!(cp >= pe - 1e-7, "instance {k}: {cp} < {pe}");
        assert!(cp <= spectral_width(&ham) + 1e-7);
        assert!(cp <= global_capacity(&rho, &ham).unwrap() + 1e-7);
    }
    let mixed = QuantumState::maximally_mixed(Dims::qubits());
    let ham = antiferromagnetic(1.0, 2).unwrap();
    assert!(parallel_capacity_lower(&mixed, &ham, &opts).unwrap().value.abs() < 1e-10);
    let psi_plus = werner_state(1.0, BellState::PsiPlus).unwrap();
    assert!((parallel_capacity_lower(&psi_plus, &ham, &opts).unwrap().value - 4.0).abs() < 1e-5);
}

#[test]
fn direct_optimum_is_reproducible() {
    let (rho, ham) = random_instance(Dims::qubits(), true, "bounds/repro", 0);
    let opts = DirectOptions::with_seed(11);
    let a = pe_lower_bound(&rho, &ham, &opts).unwrap();
    let b = pe_lower_bound(&rho, &ham, &opts).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let u = a.optimum.unitary();
    let h = ham.total();
    let after = &u * rho.matrix() * u.adjoint();
    let work = trace_product(rho.matrix(), &h).re - trace_product(&after, &h).re;
    assert!((work - a.value).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn positivity_polynomials_agree_with_eigenvalues(
        a in prop::array::uniform3(-0.8f64..0.8),
        b in prop::array::uniform3(-0.8f64..0.8),
        t in prop::array::uniform9(-0.9f64..0.9),
    ) {
        let (ra, rb) = (RVec::from_row_slice(&a), RVec::from_row_slice(&b));
        let tm = RMat::from_row_slice(3, 3, &t);
        let sb = StateBloch { dims: Dims::qubits(), r_a: ra.clone(), r_b: rb.clone(), t_mat: tm.clone() };
        let min = min_eigenvalue(&reconstruct_state(&sb).unwrap());
        let (c1, c2, c3) = qubit_positivity_polynomials(&ra, &rb, &tm);
        // Away from the boundary both tests must agree.
        let margin = [c1, c2, c3].iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if min.abs() > 1e-6 && margin > 1e-9 {
            prop_assert_eq!(qubit_state_physicality(&ra, &rb, &tm), min >= 0.0);
        }
    }
}

#[test]
fn strategy_sandwich() {
    let opts = DirectOptions { restarts: 6, ..DirectOptions::default() };
    for k in 0..10 {
        let (rho, ham) = random_instance(Dims::qubits(), true, "bounds/sandwich", k);
        let pe = pe_lower_bound(&rho, &ham, &opts).unwrap().value;
        let global = global_ergotropy(&rho, &ham).unwrap().value;
        for (first, order) in [(Subsystem::A, StrategyOrder::AFirst), (Subsystem::B, StrategyOrder::BFirst)] {
            let local = local_ergotropy(&rho, &ham, first, &opts).unwrap().value;
            let ego = egoistic_total(&rho, &ham, order, &opts).unwrap().total;
            assert!(local <= ego + 1e-5 && ego <= pe + 1e-5 && pe <= global + 1e-5, "{k}: {local} {ego} {pe} {global}");
        }
    }
}
