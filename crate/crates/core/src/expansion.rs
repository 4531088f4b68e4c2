use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::dense::PauliTerms;
use crate::error::{Error, Result};
use crate::pauli::{check_qubits, raw_phase, PauliString};

/// Complex Pauli-basis coefficients `Σ c_K σ_K`, identity (code 0) included.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliExpansion {
    n: usize,
    coeffs: BTreeMap<u64, Complex64>,
}

impl PauliExpansion {
    pub fn zero(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self {
            n,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut e = Self::zero(n)?;
        e.coeffs.insert(0, Complex64::new(1.0, 0.0));
        Ok(e)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut e = Self::zero(n)?;
        for (p, c) in terms {
            e.add(&p, c)?;
        }
        Ok(e)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `code`, zero when absent.
    pub fn get(&self, code: u64) -> Complex64 {
        self.coeffs.get(&code).copied().unwrap_or_default()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.get(0)
    }

    pub fn add(&mut self, p: &PauliString, c: Complex64) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: p.num_qubits(),
            });
        }
        *self.coeffs.entry(p.code()).or_default() += c;
        Ok(())
    }

    pub(crate) fn insert_code(&mut self, code: u64, c: Complex64) {
        self.coeffs.insert(code, c);
    }

    /// `(code, coefficient)` in ascending code order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn strings(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        let n = self.n;
        self.iter()
            .map(move |(k, c)| (PauliString::new(n, k).expect("stored codes fit n"), c))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * factor)).collect(),
        }
    }

    /// Hermitian adjoint. Pauli strings are Hermitian, so only coefficients conjugate.
    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c.conj())).collect(),
        }
    }

    /// Operator product `self * other`, composed term by term.
    pub fn compose(&self, other: &PauliExpansion) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = BTreeMap::<u64, Complex64>::new();
        for (&k, &a) in &self.coeffs {
            for (&l, &b) in &other.coeffs {
                *out.entry(k ^ l).or_default() += raw_phase(k, l).rotate(a * b);
            }
        }
        Ok(Self {
            n: self.n,
            coeffs: out,
        })
    }

    /// Drops coefficients with modulus `<= tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Largest coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &PauliExpansion) -> f64 {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .map(|&k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

impl PauliTerms for PauliExpansion {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn pauli_terms(&self) -> Vec<(u64, Complex64)> {
        self.iter().collect()
    }
}
