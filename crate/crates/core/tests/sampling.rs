use parergo::linalg::CMat;
use parergo::sampling::{ginibre_state, random_hamiltonian, random_separable, RngSpec};
use parergo::Dims;
use sha2::{Digest, Sha256};

fn digest(m: &CMat) -> String {
    let mut h = Sha256::new();
    for z in m.iter() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

// Bitwise digests of the f64 entries; a different libm `ln` would change them.
const GINIBRE_QUBITS_SEED7: &str = "48462cbd9bd0166a0e35561f284948c263cdf62265b8d12165909569c8569dc0";
const GINIBRE_QUTRITS_SEED7: &str = "2780c1cb2bc07bf4904c6f18d51a422cdafcd797a77775d19020e60871e86340";
const HAMILTONIAN_QUBITS_SEED7: &str = "7971159390c08a768dd64a33787e06aeaf1b1ef1c08a12f8bfa62b016a586241";
const SEPARABLE_QUBITS_SEED7: &str = "f30f950d25abc1fe115ce419b7ac4eaa3ade603857f319f72f561a60159d5d4b";

#[test]
fn golden_digests() {
    let base = RngSpec::new(7, "golden");
    let got = [
        digest(ginibre_state(Dims::qubits(), &mut base.child("ginibre/2x2").rng()).matrix()),
        digest(ginibre_state(Dims::new(3, 3).unwrap(), &mut base.child("ginibre/3x3").rng()).matrix()),
        digest(&random_hamiltonian(Dims::qubits(), true, &mut base.child("hamiltonian").rng()).total()),
        digest(random_separable(Dims::qubits(), 3, &mut base.child("separable").rng()).matrix()),
    ];
    let want = [GINIBRE_QUBITS_SEED7, GINIBRE_QUTRITS_SEED7, HAMILTONIAN_QUBITS_SEED7, SEPARABLE_QUBITS_SEED7];
    assert_eq!(got, want);
}

#[test]
fn streams_are_deterministic_and_distinct() {
    let a = RngSpec::new(1, "x").child(0);
    let s1 = ginibre_state(Dims::qubits(), &mut a.rng());
    let s2 = ginibre_state(Dims::qubits(), &mut a.rng());
    assert_eq!(digest(s1.matrix()), digest(s2.matrix()));
    let other = ginibre_state(Dims::qubits(), &mut RngSpec::new(1, "x").child(1).rng());
    assert_ne!(digest(s1.matrix()), digest(other.matrix()));
    let seed = ginibre_state(Dims::qubits(), &mut RngSpec::new(2, "x").child(0).rng());
    assert_ne!(digest(s1.matrix()), digest(seed.matrix()));
}

#[test]
fn gaussian_moments() {
    let mut r = RngSpec::new(3, "moments").rng();
    let n = 200_000;
    let xs: Vec<f64> = (0..n).map(|_| r.gaussian()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    assert!(mean.abs() < 0.01 && (var - 1.0).abs() < 0.01, "{mean} {var}");
}

#[test]
fn ginibre_mean_purity() {
    let base = RngSpec::new(20240917, "purity");
    let n = 1000;
    let mean = (0..n).map(|k| ginibre_state(Dims::qubits(), &mut base.child(k).rng()).purity()).sum::<f64>() / n as f64;
    // Square Ginibre in dimension D has E[tr ρ²] = 2D/(D² + 1).
    assert!((mean - 8.0 / 17.0).abs() < 0.02, "{mean}");
    assert!((0.2..0.6).contains(&mean));
    assert!((mean - 0.473499526516318).abs() < 1e-12, "{mean}");
}
