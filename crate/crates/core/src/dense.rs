//! Brute-force reference: dense 2^n x 2^n operators built by Kronecker
//! products and exponentiated by full Hermitian eigendecomposition.
//!
//! Basis states `|k_1 ... k_n>` are ordered by integer value with qubit 1 the
//! most significant bit, matching the big-endian Pauli codes, so
//! `pauli_matrix("30")` is `Z ⊗ I`.

use std::io::{Read, Write};

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pauli::{check_qubits, PauliString};

pub const DEFAULT_DENSE_CAP: usize = 10;
pub const MAX_DENSE_CAP: usize = 12;

/// Hermiticity tolerance for `dense_exp` input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const BINARY_MAGIC: &[u8; 4] = b"PEXP";

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major 2^n x 2^n complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..m.dim() {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    pub fn from_entries(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(Error::ShapeMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        Ok(Self { n, data })
    }

    /// Square matrix of side `dim`, which must be a power of two.
    pub fn from_square(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::NotPowerOfTwo(dim));
        }
        Self::from_entries(dim.trailing_zeros() as usize, data)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        Self { n: self.n, data }
    }

    /// max |m - m^H| over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &DenseOperator) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &DenseOperator) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self::from_faer(
            self.n,
            (self.to_faer() * other.to_faer()).as_ref(),
        ))
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        let dim = self.dim();
        Mat::from_fn(dim, dim, |r, c| self.data[r * dim + c])
    }

    pub(crate) fn from_faer(n: usize, m: faer::MatRef<'_, Complex64>) -> Self {
        let dim = m.nrows();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            data.extend((0..dim).map(|c| m[(r, c)]));
        }
        Self { n, data }
    }

    fn check_shape(&self, other: &DenseOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Nested `[[[re, im], ...], ...]` rows.
    pub fn to_json(&self) -> serde_json::Value {
        let dim = self.dim();
        serde_json::Value::Array(
            (0..dim)
                .map(|r| {
                    serde_json::Value::Array(
                        (0..dim)
                            .map(|c| {
                                let x = self.get(r, c);
                                serde_json::json!([x.re, x.im])
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// `PEXP` magic, little-endian `u32` qubit count, then `re, im` f64 pairs row-major.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        for x in &self.data {
            w.write_all(&x.re.to_le_bytes())?;
            w.write_all(&x.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::InvalidMatrix("missing PEXP magic".into()));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let n = u32::from_le_bytes(word) as usize;
        if n > MAX_DENSE_CAP {
            return Err(Error::DenseCapExceeded {
                n,
                cap: MAX_DENSE_CAP,
            });
        }
        check_qubits(n)?;
        let len = 1usize << (2 * n);
        let mut data = Vec::with_capacity(len);
        let mut buf = [0u8; 16];
        for _ in 0..len {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
            data.push(Complex64::new(re, im));
        }
        Ok(Self { n, data })
    }
}

/// A square complex matrix of arbitrary side, as read from JSON. Entries may
/// be `[re, im]` pairs or bare reals.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "Vec<Vec<JsonEntry>>")]
pub struct SquareMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
enum JsonEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl TryFrom<Vec<Vec<JsonEntry>>> for SquareMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<JsonEntry>>) -> std::result::Result<Self, String> {
        let dim = rows.len();
        if dim == 0 {
            return Err("empty matrix".into());
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(format!("row {i} has {} entries, expected {dim}", row.len()));
            }
            data.extend(row.into_iter().map(|e| match e {
                JsonEntry::Real(re) => Complex64::new(re, 0.0),
                JsonEntry::Complex([re, im]) => Complex64::new(re, im),
            }));
        }
        Ok(SquareMatrix { dim, data })
    }
}

impl SquareMatrix {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_operator(self) -> Result<DenseOperator> {
        DenseOperator::from_square(self.dim, self.data)
    }
}

impl From<DenseOperator> for SquareMatrix {
    fn from(m: DenseOperator) -> Self {
        SquareMatrix {
            dim: m.dim(),
            data: m.data,
        }
    }
}

/// Anything that can be read as `Σ c_K σ_K`.
pub trait PauliTerms {
    fn num_qubits(&self) -> usize;
    /// `(code, coefficient)` pairs, identity code 0 included when present.
    fn pauli_terms(&self) -> Vec<(u64, Complex64)>;
}

/// Max entrywise and Frobenius distance between two operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub max_abs: f64,
    pub frobenius: f64,
}

pub fn compare(a: &DenseOperator, b: &DenseOperator) -> Result<Comparison> {
    a.check_shape(b)?;
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0f64;
    for (x, y) in a.data.iter().zip(&b.data) {
        let d = (x - y).norm();
        max_abs = max_abs.max(d);
        sum_sq += d * d;
    }
    Ok(Comparison {
        max_abs,
        frobenius: sum_sq.sqrt(),
    })
}

/// Row-major Kronecker product of two square matrices.
pub fn kron(a: &[Complex64], a_dim: usize, b: &[Complex64], b_dim: usize) -> Vec<Complex64> {
    let dim = a_dim * b_dim;
    let mut out = vec![ZERO; dim * dim];
    for ar in 0..a_dim {
        for ac in 0..a_dim {
            let x = a[ar * a_dim + ac];
            if x == ZERO {
                continue;
            }
            for br in 0..b_dim {
                let row = (ar * b_dim + br) * dim + ac * b_dim;
                for bc in 0..b_dim {
                    out[row + bc] = x * b[br * b_dim + bc];
                }
            }
        }
    }
    out
}

/// The four single-qubit matrices I, X, Y, Z, row-major.
pub fn single_qubit_pauli(digit: u8) -> [Complex64; 4] {
    let i = Complex64::i();
    match digit {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -i, i, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli digit out of range: {digit}"),
    }
}

/// Dense reference computations, bounded by a qubit cap.
#[derive(Clone, Copy, Debug)]
pub struct DenseOracle {
    cap: usize,
    exec: Exec,
}

impl Default for DenseOracle {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DENSE_CAP,
            exec: Exec::default(),
        }
    }
}

impl DenseOracle {
    pub fn with_cap(cap: usize) -> Result<Self> {
        if cap == 0 || cap > MAX_DENSE_CAP {
            return Err(Error::DenseCapExceeded {
                n: cap,
                cap: MAX_DENSE_CAP,
            });
        }
        Ok(Self {
            cap,
            ..Self::default()
        })
    }

    pub fn exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::DenseCapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    /// `σ_{k_1} ⊗ ... ⊗ σ_{k_n}`, leftmost digit outermost.
    pub fn pauli_matrix(&self, p: &PauliString) -> Result<DenseOperator> {
        self.check_cap(p.num_qubits())?;
        let mut acc = vec![ONE];
        let mut dim = 1;
        for d in p.digits() {
            acc = kron(&acc, dim, &single_qubit_pauli(d), 2);
            dim *= 2;
        }
        DenseOperator::from_entries(p.num_qubits(), acc)
    }

    /// `Σ_K c_K σ_K`.
    pub fn reconstruct<T: PauliTerms + ?Sized>(&self, terms: &T) -> Result<DenseOperator> {
        let n = terms.num_qubits();
        self.check_cap(n)?;
        let mut out = DenseOperator::zeros(n)?;
        let dim = out.dim();
        for (code, coeff) in terms.pauli_terms() {
            if coeff == ZERO {
                continue;
            }
            let m = self.pauli_matrix(&PauliString::new(n, code)?)?;
            self.exec.for_each_chunk(&mut out.data, dim, |r, row| {
                let src = &m.data[r * dim..(r + 1) * dim];
                for (o, &s) in row.iter_mut().zip(src) {
                    *o += coeff * s;
                }
            });
        }
        Ok(out)
    }

    /// Eigenvalues (ascending) and eigenvectors of a Hermitian operator.
    pub fn eigh(&self, m: &DenseOperator) -> Result<(Vec<f64>, Mat<Complex64>)> {
        self.check_cap(m.num_qubits())?;
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let evd = m
            .to_faer()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let values = (0..m.dim()).map(|j| evd.S()[j].re).collect();
        Ok((values, evd.U().to_owned()))
    }

    pub fn eigenvalues(&self, m: &DenseOperator) -> Result<Vec<f64>> {
        Ok(self.eigh(m)?.0)
    }

    /// `W diag(exp(-β λ)) W^H` for Hermitian `m = W diag(λ) W^H`.
    pub fn exp(&self, m: &DenseOperator, beta: Complex64) -> Result<DenseOperator> {
        let (values, vectors) = self.eigh(m)?;
        let weights: Vec<Complex64> = values.iter().map(|&l| (-beta * l).exp()).collect();
        let scaled = Mat::from_fn(m.dim(), m.dim(), |r, c| vectors[(r, c)] * weights[c]);
        let product = scaled * vectors.adjoint();
        Ok(DenseOperator::from_faer(m.num_qubits(), product.as_ref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_string_is_identity_matrix() {
        let oracle = DenseOracle::default();
        let m = oracle.pauli_matrix(&"0000".parse().unwrap()).unwrap();
        assert_eq!(m, DenseOperator::identity(4).unwrap());
    }

    #[test]
    fn traces_of_pauli_matrices() {
        let oracle = DenseOracle::default();
        for code in 0..64 {
            let m = oracle
                .pauli_matrix(&PauliString::new(3, code).unwrap())
                .unwrap();
            let expected = if code == 0 { 8.0 } else { 0.0 };
            assert_eq!(m.trace(), c(expected, 0.0));
        }
    }

    #[test]
    fn kronecker_order_is_big_endian() {
        // Z ⊗ I is diag(1, 1, -1, -1).
        let m = DenseOracle::default()
            .pauli_matrix(&"30".parse().unwrap())
            .unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn dense_exp_of_zero_and_diagonal() {
        let oracle = DenseOracle::default();
        let zero = DenseOperator::zeros(2).unwrap();
        let e = oracle.exp(&zero, c(0.7, 0.2)).unwrap();
        assert!(
            compare(&e, &DenseOperator::identity(2).unwrap())
                .unwrap()
                .max_abs
                < 1e-15
        );

        let z = oracle.pauli_matrix(&"3".parse().unwrap()).unwrap();
        let beta = 0.8;
        let e = oracle.exp(&z, c(beta, 0.0)).unwrap();
        assert!((e.get(0, 0) - c((-beta).exp(), 0.0)).norm() < 1e-14);
        assert!((e.get(1, 1) - c(beta.exp(), 0.0)).norm() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn dense_exp_rejects_non_hermitian() {
        let mut m = DenseOperator::zeros(1).unwrap();
        m.set(0, 1, ONE);
        assert!(matches!(
            DenseOracle::default().exp(&m, ONE),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let oracle = DenseOracle::with_cap(3).unwrap();
        assert!(matches!(
            oracle.pauli_matrix(&"0000".parse().unwrap()),
            Err(Error::DenseCapExceeded { n: 4, cap: 3 })
        ));
        assert!(DenseOracle::with_cap(13).is_err());
    }

    #[test]
    fn compare_metrics() {
        let x = DenseOperator::identity(3).unwrap();
        let zero = DenseOperator::zeros(3).unwrap();
        let same = compare(&x, &x).unwrap();
        assert_eq!((same.max_abs, same.frobenius), (0.0, 0.0));
        let diff = compare(&x, &zero).unwrap();
        assert_eq!(diff.max_abs, 1.0);
        assert!((diff.frobenius - 8f64.sqrt()).abs() < 1e-15);
        assert!(compare(&x, &DenseOperator::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let mut m = DenseOperator::zeros(2).unwrap();
        m.set(1, 2, c(0.25, -3.5));
        m.set(3, 0, c(-1e-300, 7.0));
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"PEXP");
        assert_eq!(buf.len(), 8 + 16 * 16);
        assert_eq!(DenseOperator::read_binary(&buf[..]).unwrap(), m);
        assert!(DenseOperator::read_binary(&b"NOPE\0\0\0\0"[..]).is_err());
    }

    #[test]
    fn json_matrix_parsing() {
        let m = SquareMatrix::from_json_str("[[1, [0, 2]], [[0, -2], -1]]").unwrap();
        assert_eq!(m.dim, 2);
        assert_eq!(m.data[1], c(0.0, 2.0));
        let op = m.into_operator().unwrap();
        let back = SquareMatrix::from_json_str(&op.to_json().to_string()).unwrap();
        assert_eq!(back.into_operator().unwrap(), op);
        assert!(SquareMatrix::from_json_str("[[1, 2]]").is_err());
        let three = SquareMatrix::from_json_str("[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
        assert!(matches!(
            three.into_operator(),
            Err(Error::NotPowerOfTwo(3))
        ));
    }
}
