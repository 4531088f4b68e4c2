//! Reference Hamiltonians used by the fixtures, benchmarks and tests.

use num_complex::Complex64;

use crate::error::Result;
use crate::hamiltonian::SparseHamiltonian;
use crate::pauli::PauliString;

/// Strings of the 4-qubit cluster model, in ascending code order.
pub const CLUSTER_STRINGS: [&str; 7] = ["0123", "0213", "0330", "1023", "1100", "1230", "1313"];

/// `a σ_123 + b σ_231 + c σ_312`; the three strings pairwise anticommute.
pub fn cyclic_triple(a: f64, b: f64, c: f64) -> SparseHamiltonian {
    SparseHamiltonian::from_terms(3, [("123", a), ("231", b), ("312", c)]).expect("valid strings")
}

/// Seven-term 4-qubit cluster, `Σ h_i σ_{CLUSTER_STRINGS[i]}` (τ = 7, closed).
pub fn cluster(h: [f64; 7]) -> SparseHamiltonian {
    SparseHamiltonian::from_terms(4, CLUSTER_STRINGS.iter().copied().zip(h)).expect("valid strings")
}

/// The cluster pattern acting on the last four of `n ≥ 4` qubits, identity
/// elsewhere. τ stays 7 for every `n`.
pub fn padded_cluster(n: usize, h: [f64; 7]) -> Result<SparseHamiltonian> {
    assert!(n >= 4, "the cluster pattern needs four qubits");
    let pad = "0".repeat(n - 4);
    let mut out = SparseHamiltonian::new(n)?;
    for (s, coeff) in CLUSTER_STRINGS.iter().zip(h) {
        out.add_term(&format!("{pad}{s}").parse()?, coeff)?;
    }
    Ok(out)
}

/// Qutrit Hamiltonian `2|0><0| - 4i|1><2| + 4i|2><1| - 2|2><2|`, row-major 3x3.
pub fn qutrit() -> Vec<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    vec![r(2.0), z, z, z, z, i(-4.0), z, i(4.0), r(-2.0)]
}

/// `(1/N) Σ_{K ∈ {0,1}^n} σ_K`, the density operator of the uniform
/// superposition. Every dense entry equals `1/N`.
pub fn uniform_superposition(n: usize) -> Result<SparseHamiltonian> {
    let weight = 1.0 / (1u64 << n) as f64;
    binary_strings(n, n, |_| weight)
}

/// All strings over `{I, X}` on the first `k` of `n` qubits; the non-identity
/// ones (τ = 2^k - 1) form a closed set. `coeff` maps each string's index
/// `1..2^k` to its coefficient; index 0 feeds the identity offset.
pub fn binary_strings<F>(n: usize, k: usize, coeff: F) -> Result<SparseHamiltonian>
where
    F: Fn(u64) -> f64,
{
    assert!(k <= n, "k must not exceed n");
    let mut out = SparseHamiltonian::new(n)?;
    for bits in 0..(1u64 << k) {
        let digits: Vec<u8> = (0..n)
            .map(|j| {
                if j < k {
                    ((bits >> (k - 1 - j)) & 1) as u8
                } else {
                    0
                }
            })
            .collect();
        out.add_term(&PauliString::from_digits(&digits)?, coeff(bits))?;
    }
    Ok(out)
}

/// Open-chain XY model with a transverse field:
/// `J Σ_i (X_i X_{i+1} + Y_i Y_{i+1}) + g Σ_i Z_i`. Not Pauli-sparse.
pub fn heisenberg_xy(n: usize, coupling: f64, field: f64) -> Result<SparseHamiltonian> {
    let mut out = SparseHamiltonian::new(n)?;
    for i in 0..n {
        if i + 1 < n {
            for d in [1u8, 2] {
                let mut digits = vec![0u8; n];
                digits[i] = d;
                digits[i + 1] = d;
                out.add_term(&PauliString::from_digits(&digits)?, coupling)?;
            }
        }
        let mut digits = vec![0u8; n];
        digits[i] = 3;
        out.add_term(&PauliString::from_digits(&digits)?, field)?;
    }
    Ok(out)
}

/// Deterministic coefficients in `[-1, 1]` for benchmarks and fixtures.
pub fn scrambled_coefficient(index: u64) -> f64 {
    let x = (index as f64 + 1.0) * 12.9898;
    (x.sin() * 43758.5453).rem_euclid(1.0) * 2.0 - 1.0
}
