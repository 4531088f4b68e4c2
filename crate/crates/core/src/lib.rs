//! Exponentials `exp(-βH)` of n-qubit Hamiltonians given as sparse Pauli
//! expansions.
//!
//! When the term set `T` of `H = Σ h_K σ_K` is closed under composition, the
//! resolvent `(z - H)^{-1}` stays in `span{I, σ_K : K ∈ T}` and its
//! coefficients solve a `(1+τ) x (1+τ)` Hermitian system, `τ = |T|`. The
//! exponential then follows from the residues of that small system, at a
//! cost governed by `τ` rather than by `2^n`.
//!
//! ```
//! use num_complex::Complex64;
//! use pauliexp::{exp_spectral, SparseHamiltonian};
//!
//! let h = SparseHamiltonian::from_terms(3, [("123", 1.0), ("231", 1.0), ("312", 1.0)]).unwrap();
//! let u = exp_spectral(&h, Complex64::new(0.0, 0.5)).unwrap();
//! let p = 3f64.sqrt();
//! assert!((u.identity_coefficient().re - (0.5 * p).cos()).abs() < 1e-12);
//! ```

pub mod dense;
pub mod engine;
pub mod error;
pub mod exec;
pub mod expansion;
pub mod format;
pub mod hamiltonian;
pub mod models;
pub mod pauli;
pub mod resolvent;

pub use dense::{compare, Comparison, DenseOperator, DenseOracle, PauliTerms, SquareMatrix};
pub use engine::{
    exp_anticommuting, exp_contour, exp_spectral, gibbs_state, partition_function, ContourSpec,
    Engine, PartitionFunction, SpectralData,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use expansion::PauliExpansion;
pub use hamiltonian::{
    close, embed, parse_hamiltonian, pauli_decompose, ClosedTermSet, Decomposition,
    SparseHamiltonian,
};
pub use pauli::{parse_string, Alphabet, PauliString, Phase};
pub use resolvent::{
    build_structure_matrix, characteristic_poly_at, resolvent_at, ResolventCoefficients,
    StructureMatrix,
};
