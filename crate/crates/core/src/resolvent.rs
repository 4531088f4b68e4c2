//! The reduced resolvent system.
//!
//! Writing `(z - H)^{-1} = r_0 I + Σ_{K ∈ T} r_K σ_K` and multiplying out
//! `(z - H)^{-1} (z - H) = I` gives `(z I - A) r = e_0`, where `A` is the
//! `(1+τ) x (1+τ)` matrix of right multiplication by `H` on
//! `span{I, σ_K : K ∈ T}`:
//!
//! ```text
//! A[0][i] = A[i][0] = h_{K_i}
//! A[M][K] = Σ_{L : K*L = M} h_L S(K, L)      (M ≠ K, both ≠ identity)
//! ```
//!
//! The diagonal is zero because the Hamiltonian part is traceless. Each
//! off-diagonal entry has exactly one contributing `L = K*M`, so entries are
//! exact products of a real coefficient and a unit phase, and `A` is
//! Hermitian bit for bit.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hamiltonian::{ClosedTermSet, SparseHamiltonian};
use crate::pauli::{raw_phase, PauliString};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative residual bound accepted from a resolvent solve.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// The Hermitian matrix `A` with `(z I - A) r = e_0`. Position 0 is the
/// identity; position `i ≥ 1` is `K_i` of the closed term set.
#[derive(Clone, Debug)]
pub struct StructureMatrix {
    set: ClosedTermSet,
    coefficients: Vec<f64>,
    matrix: Mat<Complex64>,
}

pub fn build_structure_matrix(
    h: &SparseHamiltonian,
    set: &ClosedTermSet,
) -> Result<StructureMatrix> {
    build_structure_matrix_with(h, set, Exec::default())
}

/// As [`build_structure_matrix`], assembling columns under `exec`.
pub fn build_structure_matrix_with(
    h: &SparseHamiltonian,
    set: &ClosedTermSet,
    exec: Exec,
) -> Result<StructureMatrix> {
    if h.num_qubits() != set.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: h.num_qubits(),
            right: set.num_qubits(),
        });
    }
    for p in h.support() {
        if set.position(p.code()).is_none() {
            return Err(Error::TermOutsideSet(p.to_string()));
        }
    }
    let codes = set.codes();
    let tau = codes.len();
    let coefficients: Vec<f64> = codes.iter().map(|&k| h.coefficient(k)).collect();
    let active: Vec<(u64, f64)> = codes
        .iter()
        .zip(&coefficients)
        .filter(|(_, &c)| c != 0.0)
        .map(|(&k, &c)| (k, c))
        .collect();

    // Column i+1 collects σ_{K_i} H expanded over the set.
    let columns = exec.map(tau, |i| -> Result<Vec<(usize, Complex64)>> {
        let k = codes[i];
        let mut column = Vec::with_capacity(active.len());
        for &(l, h_l) in &active {
            let m = k ^ l;
            if m == 0 {
                continue;
            }
            let row = set.position(m).ok_or_else(|| {
                let s = |c| {
                    PauliString::new(set.num_qubits(), c)
                        .expect("fits")
                        .to_string()
                };
                Error::NotClosed {
                    left: s(k),
                    right: s(l),
                    product: s(m),
                }
            })?;
            column.push((row + 1, raw_phase(k, l).scale(h_l)));
        }
        Ok(column)
    });

    let size = tau + 1;
    let mut matrix = Mat::<Complex64>::zeros(size, size);
    for (i, column) in columns.into_iter().enumerate() {
        for (row, value) in column? {
            matrix[(row, i + 1)] += value;
        }
    }
    for (i, &c) in coefficients.iter().enumerate() {
        matrix[(0, i + 1)] = Complex64::new(c, 0.0);
        matrix[(i + 1, 0)] = Complex64::new(c, 0.0);
    }

    for r in 0..size {
        if matrix[(r, r)] != ZERO {
            return Err(Error::NotHermitianStructure { row: r, col: r });
        }
        for c in r + 1..size {
            if matrix[(r, c)] != matrix[(c, r)].conj() {
                return Err(Error::NotHermitianStructure { row: r, col: c });
            }
        }
    }

    Ok(StructureMatrix {
        set: set.clone(),
        coefficients,
        matrix,
    })
}

impl StructureMatrix {
    /// `1 + τ`.
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn term_set(&self) -> &ClosedTermSet {
        &self.set
    }

    pub fn num_qubits(&self) -> usize {
        self.set.num_qubits()
    }

    /// Pauli code of position `i` (0 is the identity).
    pub fn code_at(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.set.codes()[i - 1]
        }
    }

    /// `h_{K_i}` for position `i ≥ 1`.
    pub fn coefficient_at(&self, i: usize) -> f64 {
        self.coefficients[i - 1]
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn as_mat(&self) -> MatRef<'_, Complex64> {
        self.matrix.as_ref()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.size())
            .map(|r| {
                (0..self.size())
                    .map(|c| self.matrix[(r, c)].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Union of the Gershgorin discs on the real axis, `(lo, hi)`.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..self.size() {
            let center = self.matrix[(r, r)].re;
            let radius: f64 = (0..self.size())
                .filter(|&c| c != r)
                .map(|c| self.matrix[(r, c)].norm())
                .sum();
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        (lo, hi)
    }

    /// `z I - A`.
    pub fn shifted(&self, z: Complex64) -> Mat<Complex64> {
        let size = self.size();
        Mat::from_fn(size, size, |r, c| {
            if r == c {
                z - self.matrix[(r, c)]
            } else {
                -self.matrix[(r, c)]
            }
        })
    }

    /// Pivot threshold below which a solve is reported singular.
    pub fn spectral_gap_tol(&self) -> f64 {
        1e-12 * self.norm_inf().max(1.0)
    }

    /// `{"size", "codes", "entries": [[[re, im], ...], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let size = self.size();
        let n = self.num_qubits();
        let codes: Vec<String> = (0..size)
            .map(|i| {
                PauliString::new(n, self.code_at(i))
                    .expect("fits")
                    .to_string()
            })
            .collect();
        let entries: Vec<Vec<[f64; 2]>> = (0..size)
            .map(|r| {
                (0..size)
                    .map(|c| [self.matrix[(r, c)].re, self.matrix[(r, c)].im])
                    .collect()
            })
            .collect();
        serde_json::json!({ "size": size, "codes": codes, "entries": entries })
    }
}

/// Solution `r` of `(z I - A) r = e_0`; `r[0] = r_0`, `r[i] = r_{K_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventCoefficients {
    pub z: Complex64,
    pub r: Vec<Complex64>,
}

impl ResolventCoefficients {
    pub fn r0(&self) -> Complex64 {
        self.r[0]
    }

    /// `max_i |((z I - A) r - e_0)_i|`.
    pub fn residual(&self, a: &StructureMatrix) -> f64 {
        residual_inf(a, self.z, &self.r)
    }
}

fn residual_inf(a: &StructureMatrix, z: Complex64, r: &[Complex64]) -> f64 {
    let size = a.size();
    (0..size)
        .map(|row| {
            let mut acc = z * r[row]
                - if row == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    ZERO
                };
            for (col, &x) in r.iter().enumerate() {
                acc -= a.get(row, col) * x;
            }
            acc.norm()
        })
        .fold(0.0, f64::max)
}

/// Solves `(z I - A) r = e_0` by LU with partial pivoting.
///
/// A vanishing pivot or an oversized residual means `z` sits on (or
/// numerically at) an eigenvalue of the Hamiltonian and is reported as
/// [`Error::SingularSystem`].
pub fn resolvent_at(a: &StructureMatrix, z: Complex64) -> Result<ResolventCoefficients> {
    use faer::linalg::solvers::Solve;

    let size = a.size();
    let shifted = a.shifted(z);
    let lu = shifted.partial_piv_lu();
    let min_pivot = (0..size)
        .map(|i| lu.U()[(i, i)].norm())
        .fold(f64::INFINITY, f64::min);
    let mut rhs = Mat::<Complex64>::zeros(size, 1);
    rhs[(0, 0)] = Complex64::new(1.0, 0.0);
    let solution = lu.solve(&rhs);
    let r: Vec<Complex64> = (0..size).map(|i| solution[(i, 0)]).collect();

    if min_pivot.is_nan() || min_pivot <= a.spectral_gap_tol() || r.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem {
            z,
            residual: f64::INFINITY,
        });
    }
    let residual = residual_inf(a, z, &r);
    if residual > RESIDUAL_TOL * (z.norm() + a.norm_inf()) {
        return Err(Error::SingularSystem { z, residual });
    }
    Ok(ResolventCoefficients { z, r })
}

/// `det(z I - A)` from an LU factorisation.
pub fn characteristic_poly_at(a: &StructureMatrix, z: Complex64) -> Complex64 {
    a.shifted(z).determinant()
}

/// `Π_j (z - λ_j)` over precomputed eigenvalues of `A`.
pub fn characteristic_poly_from_spectrum(eigenvalues: &[f64], z: Complex64) -> Complex64 {
    eigenvalues.iter().map(|&l| z - l).product()
}
