#![allow(dead_code)]

use num_complex::Complex64;
use pauliexp::{close, PauliString, SparseHamiltonian};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_pauli(rng: &mut StdRng, n: usize) -> PauliString {
    loop {
        let digits: Vec<u8> = (0..n).map(|_| rng.random_range(0..4u8)).collect();
        let p = PauliString::from_digits(&digits).unwrap();
        if !p.is_identity() {
            return p;
        }
    }
}

/// Random Hamiltonian whose closed term set has at most `max_tau` members;
/// every member of the closure gets a coefficient uniform in [-1, 1].
pub fn random_closed_hamiltonian(rng: &mut StdRng, n: usize, max_tau: usize) -> SparseHamiltonian {
    loop {
        let generators = rng.random_range(1..=4usize);
        let mut h = SparseHamiltonian::new(n).unwrap();
        for _ in 0..generators {
            h.add_term(&random_pauli(rng, n), 1.0).unwrap();
        }
        let Ok(set) = close(&h, max_tau) else {
            continue;
        };
        let mut out = SparseHamiltonian::new(n).unwrap();
        for p in set.strings() {
            out.add_term(&p, rng.random_range(-1.0..1.0)).unwrap();
        }
        return out;
    }
}

/// μ and ν of the cluster model.
pub fn cluster_mu_nu(h: &[f64; 7]) -> (f64, f64) {
    let mu = h[1..].iter().map(|x| x * x).sum();
    let nu = 2.0 * h[1] * h[2] + 2.0 * h[3] * h[4] - 2.0 * h[5] * h[6];
    (mu, nu)
}

/// Closed-form identity coefficient of exp(-βH) for the cluster model.
pub fn cluster_partition(h: &[f64; 7], beta: f64) -> f64 {
    let (mu, nu) = cluster_mu_nu(h);
    0.5 * (beta * h[0]).exp() * (beta * (mu - nu).sqrt()).cosh()
        + 0.5 * (-beta * h[0]).exp() * (beta * (mu + nu).sqrt()).cosh()
}

pub fn random_cluster_coefficients(rng: &mut StdRng) -> [f64; 7] {
    std::array::from_fn(|_| rng.random_range(-1.0..1.0))
}
