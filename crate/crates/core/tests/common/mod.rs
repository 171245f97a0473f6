#![allow(dead_code)]

use parergo::choi::{choi_of_kraus, ChoiOperator};
use parergo::direct::LocalUnitaryParams;
use parergo::linalg::{c, identity, kron, CMat};
use parergo::sampling::{ginibre_state, random_hamiltonian, RngSpec, Sampler};
use parergo::{BipartiteHamiltonian, Dims, QuantumState};

pub fn rng(label: &str, k: usize) -> Sampler {
    RngSpec::new(20240917, format!("{label}/{k}")).rng()
}

pub fn random_instance(dims: Dims, local: bool, label: &str, k: usize) -> (QuantumState, BipartiteHamiltonian) {
    let mut r = rng(label, k);
    let rho = ginibre_state(dims, &mut r);
    let ham = random_hamiltonian(dims, local, &mut r);
    (rho, ham)
}

/// All permutations of 0..n by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// (min, max) of Σ_k r_{π(k)} e_k over every pairing of populations with levels.
pub fn pairing_extremes(r: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in permutations(r.len()) {
        let s: f64 = p.iter().zip(e).map(|(&i, &ek)| r[i] * ek).sum();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

pub fn random_local_unitary(d: usize, r: &mut Sampler) -> CMat {
    LocalUnitaryParams::random(d, r).unitary()
}

/// A product unitary mixed with amplitude damping on A, which is not unital.
pub fn damped_product(dims: Dims, k: usize) -> ChoiOperator {
    let mut r = rng("choi/damped", k);
    let u = kron(&random_local_unitary(dims.a, &mut r), &random_local_unitary(dims.b, &mut r));
    let eps = r.uniform_in(0.1, 0.5);
    let gamma = r.uniform_in(0.3, 1.0);
    let mut k0 = identity(dims.a);
    k0[(1, 1)] = c((1.0 - gamma).sqrt(), 0.0);
    let mut k1 = CMat::zeros(dims.a, dims.a);
    k1[(0, 1)] = c(gamma.sqrt(), 0.0);
    let ib = identity(dims.b);
    let mut kraus = vec![&u * c((1.0 - eps).sqrt(), 0.0)];
    for kk in [k0, k1] {
        kraus.push(kron(&kk, &ib) * c(eps.sqrt(), 0.0));
    }
    choi_of_kraus(dims, &kraus).expect("valid Kraus operators")
}
