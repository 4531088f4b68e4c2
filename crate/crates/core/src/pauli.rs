//! Exact arithmetic on n-qubit Pauli strings.
//!
//! A string `k_1 k_2 ... k_n` with `k_j` in `{0,1,2,3}` (I, X, Y, Z) is stored as
//! its base-4 positional value, leftmost digit most significant. With this
//! encoding the 2-bit digit of a product is the XOR of the operand digits, so
//! composition is a single XOR and the phase is a pair of popcounts.

use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register. 2 bits per qubit fill a `u64`.
pub const MAX_QUBITS: usize = 32;

const LOW_BITS: u64 = 0x5555_5555_5555_5555;

/// A power of `i`, stored as the exponent mod 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(exponent: i64) -> Self {
        Phase(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// `self * x` for real `x`; exact, no rounding.
    pub fn scale(self, x: f64) -> Complex64 {
        match self.0 {
            0 => Complex64::new(x, 0.0),
            1 => Complex64::new(0.0, x),
            2 => Complex64::new(-x, 0.0),
            _ => Complex64::new(0.0, -x),
        }
    }

    /// `self * z`; exact, no rounding.
    pub fn rotate(self, z: Complex64) -> Complex64 {
        match self.0 {
            0 => z,
            1 => Complex64::new(-z.im, z.re),
            2 => -z,
            _ => Complex64::new(z.im, -z.re),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Text form of a Pauli string.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Alphabet {
    /// `0123`
    #[default]
    Digits,
    /// `IXYZ`
    Letters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    n: u8,
    code: u64,
}

impl PauliString {
    pub fn new(n: usize, code: u64) -> Result<Self> {
        check_qubits(n)?;
        if n < MAX_QUBITS && code >> (2 * n) != 0 {
            return Err(Error::InvalidPauli {
                text: code.to_string(),
                reason: format!("code does not fit in {n} qubits"),
            });
        }
        Ok(Self { n: n as u8, code })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        check_qubits(digits.len())?;
        let mut code = 0u64;
        for &d in digits {
            if d > 3 {
                return Err(Error::InvalidPauli {
                    text: format!("{digits:?}"),
                    reason: format!("digit {d} out of range"),
                });
            }
            code = (code << 2) | d as u64;
        }
        Ok(Self {
            n: digits.len() as u8,
            code,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    /// Base-4 positional value of the digit string.
    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn is_identity(&self) -> bool {
        self.code == 0
    }

    /// Digit of qubit `j` (0-based, leftmost first).
    pub fn digit(&self, j: usize) -> u8 {
        assert!(j < self.num_qubits(), "qubit index out of range");
        ((self.code >> (2 * (self.num_qubits() - 1 - j))) & 3) as u8
    }

    pub fn digits(&self) -> Vec<u8> {
        (0..self.num_qubits()).map(|j| self.digit(j)).collect()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        support_mask(self.code).count_ones()
    }

    pub fn format(&self, alphabet: Alphabet) -> String {
        let table: &[u8; 4] = match alphabet {
            Alphabet::Digits => b"0123",
            Alphabet::Letters => b"IXYZ",
        };
        self.digits()
            .into_iter()
            .map(|d| table[d as usize] as char)
            .collect()
    }

    /// `self * other = phase * product`.
    pub fn compose(&self, other: &PauliString) -> Result<(PauliString, Phase)> {
        self.check_same(other)?;
        let product = PauliString {
            n: self.n,
            code: self.code ^ other.code,
        };
        Ok((product, raw_phase(self.code, other.code)))
    }

    /// The scalar `S(K, L)` in `σ_K σ_L = S(K, L) σ_{K*L}`.
    pub fn phase(&self, other: &PauliString) -> Result<Phase> {
        self.check_same(other)?;
        Ok(raw_phase(self.code, other.code))
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same(other)?;
        Ok(raw_commutes(self.code, other.code))
    }

    /// Real structure constant `C_KL = i S(K,L) - i S(L,K)`: zero for commuting
    /// pairs and ±2 otherwise.
    pub fn structure_constant(&self, other: &PauliString) -> Result<f64> {
        let forward = self.phase(other)?;
        let backward = other.phase(self)?;
        let c = Complex64::i() * (forward.to_complex() - backward.to_complex());
        debug_assert_eq!(c.im, 0.0);
        Ok(c.re)
    }

    fn check_same(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = if f.alternate() {
            Alphabet::Letters
        } else {
            Alphabet::Digits
        };
        f.write_str(&self.format(alphabet))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_string(text)
    }
}

/// Parses either `0123` digits or `IXYZ` letters (case-insensitive).
pub fn parse_string(text: &str) -> Result<PauliString> {
    let invalid = |reason: String| Error::InvalidPauli {
        text: text.to_string(),
        reason,
    };
    if text.is_empty() {
        return Err(invalid("empty string".into()));
    }
    let digits = text
        .chars()
        .map(|c| match c.to_ascii_uppercase() {
            '0' | 'I' => Ok(0),
            '1' | 'X' => Ok(1),
            '2' | 'Y' => Ok(2),
            '3' | 'Z' => Ok(3),
            other => Err(invalid(format!("unexpected character {other:?}"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    if digits.len() > MAX_QUBITS {
        return Err(invalid(format!("more than {MAX_QUBITS} qubits")));
    }
    PauliString::from_digits(&digits)
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(())
}

/// Low bit of each 2-bit lane set where the digit is nonzero.
#[inline]
fn support_mask(code: u64) -> u64 {
    (code | (code >> 1)) & LOW_BITS
}

/// Lanes where `a` and `b` are both nonzero, split into cyclic pairs
/// (XY, YZ, ZX: phase +i) and anticyclic pairs (phase -i).
#[inline]
fn cyclic_lanes(a: u64, b: u64) -> (u64, u64) {
    let (a0, a1) = (a & LOW_BITS, (a >> 1) & LOW_BITS);
    let (b0, b1) = (b & LOW_BITS, (b >> 1) & LOW_BITS);
    let (ax, ay, az) = (a0 & !a1, a1 & !a0, a0 & a1);
    let (bx, by, bz) = (b0 & !b1, b1 & !b0, b0 & b1);
    let plus = (ax & by) | (ay & bz) | (az & bx);
    let minus = (ay & bx) | (az & by) | (ax & bz);
    (plus, minus)
}

#[inline]
pub(crate) fn raw_phase(a: u64, b: u64) -> Phase {
    let (plus, minus) = cyclic_lanes(a, b);
    Phase::from_exponent(plus.count_ones() as i64 + 3 * minus.count_ones() as i64)
}

#[inline]
pub(crate) fn raw_commutes(a: u64, b: u64) -> bool {
    let (plus, minus) = cyclic_lanes(a, b);
    (plus | minus).count_ones() % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Per-qubit table, written out independently of the lane arithmetic.
    fn table_phase(a: &PauliString, b: &PauliString) -> Phase {
        let mut phase = Phase::ONE;
        for (x, y) in a.digits().into_iter().zip(b.digits()) {
            phase *= match (x, y) {
                (1, 2) | (2, 3) | (3, 1) => Phase::I,
                (2, 1) | (3, 2) | (1, 3) => Phase::MINUS_I,
                _ => Phase::ONE,
            };
        }
        phase
    }

    #[test]
    fn compose_examples() {
        let (m, s) = p("312").compose(&p("210")).unwrap();
        assert_eq!(m, p("102"));
        assert_eq!(s, Phase::MINUS_I);

        let (m, s) = p("123").compose(&p("312")).unwrap();
        assert_eq!(m, p("231"));
        assert_eq!(s, Phase::I);

        let k = p("2301");
        assert_eq!(k.compose(&p("0000")).unwrap(), (k, Phase::ONE));
        assert_eq!(k.compose(&k).unwrap(), (p("0000"), Phase::ONE));
    }

    #[test]
    fn phase_examples() {
        assert_eq!(p("231").phase(&p("312")).unwrap(), Phase::MINUS_I);
        assert_eq!(p("000").phase(&p("123")).unwrap(), Phase::ONE);
        assert_eq!(p("123").phase(&p("312")).unwrap(), Phase::I);
    }

    #[test]
    fn commutation_and_structure_constants() {
        assert!(!p("123").commutes(&p("231")).unwrap());
        assert!(p("123").commutes(&p("123")).unwrap());
        assert!(p("123").commutes(&p("000")).unwrap());
        // XX and ZZ anticommute on each qubit, so they commute overall.
        assert!(p("11").commutes(&p("33")).unwrap());

        assert_eq!(p("123").structure_constant(&p("123")).unwrap(), 0.0);
        assert_eq!(p("123").structure_constant(&p("312")).unwrap(), -2.0);
        assert_eq!(p("000").structure_constant(&p("312")).unwrap(), 0.0);
    }

    #[test]
    fn lane_phase_matches_table_exhaustively_for_three_qubits() {
        for a in 0..64 {
            for b in 0..64 {
                let (x, y) = (
                    PauliString::new(3, a).unwrap(),
                    PauliString::new(3, b).unwrap(),
                );
                assert_eq!(x.phase(&y).unwrap(), table_phase(&x, &y), "{x} {y}");
            }
        }
    }

    #[test]
    fn mismatched_qubits_are_rejected() {
        assert!(matches!(
            p("12").compose(&p("123")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(p("12").phase(&p("1")).is_err());
        assert!(p("12").commutes(&p("1")).is_err());
        assert!(p("12").structure_constant(&p("1")).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(p("XZY").digits(), vec![1, 3, 2]);
        assert_eq!(p("xzy"), p("132"));
        let s = p("0123");
        assert_eq!(s.num_qubits(), 4);
        assert_eq!(s.code(), 27);
        assert_eq!(s.format(Alphabet::Letters), "IXYZ");
        assert_eq!(s.format(Alphabet::Digits), "0123");
        assert_eq!(format!("{s:#}"), "IXYZ");
        assert!(parse_string("14Q").is_err());
        assert!(parse_string("").is_err());
        assert!(parse_string(&"1".repeat(33)).is_err());
    }

    #[test]
    fn full_width_codes() {
        let all_z = PauliString::from_digits(&[3; 32]).unwrap();
        assert_eq!(all_z.code(), u64::MAX);
        assert_eq!(all_z.weight(), 32);
        assert!(PauliString::new(2, 16).is_err());
        assert!(PauliString::new(0, 0).is_err());
    }

    #[test]
    fn phase_helpers_are_exact() {
        let z = Complex64::new(0.3, -1.7);
        for e in 0..4 {
            let ph = Phase::from_exponent(e);
            assert_eq!(ph.rotate(z), ph.to_complex() * z);
            assert_eq!(ph.scale(2.5), ph.to_complex() * 2.5);
            assert_eq!(ph * ph.conj(), Phase::ONE);
        }
        assert_eq!(Phase::from_exponent(-1), Phase::MINUS_I);
    }
}
