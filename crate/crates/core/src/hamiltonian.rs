//! Sparse Pauli-basis Hamiltonians, composition closure of their term sets,
//! and conversion from dense operators.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseOperator, PauliTerms, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expansion::PauliExpansion;
use crate::pauli::{check_qubits, parse_string, Alphabet, PauliString};

pub const DEFAULT_CLOSURE_CAP: usize = 4096;
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// `h_0 I + Σ_{K ∈ T} h_K σ_K` with real coefficients. The identity part is
/// kept apart from the traceless terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHamiltonian {
    n: usize,
    terms: BTreeMap<u64, f64>,
    identity_offset: f64,
}

impl SparseHamiltonian {
    pub fn new(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self {
            n,
            terms: BTreeMap::new(),
            identity_offset: 0.0,
        })
    }

    pub fn from_terms<'a, I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut h = Self::new(n)?;
        for (text, coeff) in terms {
            h.add_term(&parse_string(text)?, coeff)?;
        }
        Ok(h)
    }

    /// Adds `coeff * p`. Repeated strings accumulate; the identity goes to the offset.
    pub fn add_term(&mut self, p: &PauliString, coeff: f64) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: p.num_qubits(),
            });
        }
        if !coeff.is_finite() {
            return Err(Error::InvalidPauli {
                text: p.to_string(),
                reason: format!("non-finite coefficient {coeff}"),
            });
        }
        if p.is_identity() {
            self.identity_offset += coeff;
        } else {
            *self.terms.entry(p.code()).or_insert(0.0) += coeff;
        }
        Ok(())
    }

    pub fn set_identity_offset(&mut self, offset: f64) {
        self.identity_offset = offset;
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn identity_offset(&self) -> f64 {
        self.identity_offset
    }

    /// Number of stored (non-identity) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, code: u64) -> f64 {
        self.terms.get(&code).copied().unwrap_or(0.0)
    }

    /// `(code, h_K)` ascending by code, identity excluded.
    pub fn terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.terms.iter().map(|(&k, &h)| (k, h))
    }

    pub fn support(&self) -> impl Iterator<Item = PauliString> + '_ {
        let n = self.n;
        self.terms
            .keys()
            .map(move |&k| PauliString::new(n, k).expect("stored codes fit n"))
    }

    /// `(Σ h_K^2)^{1/2}` over the traceless part.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|h| h * h).sum::<f64>().sqrt()
    }

    /// Same Hamiltonian with every coefficient (offset included) multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(&k, &h)| (k, h * factor)).collect(),
            identity_offset: self.identity_offset * factor,
        }
    }

    /// Whether every pair of distinct support strings anticommutes.
    pub fn is_anticommuting(&self) -> bool {
        self.first_commuting_pair().is_none()
    }

    pub(crate) fn first_commuting_pair(&self) -> Option<(PauliString, PauliString)> {
        let support: Vec<PauliString> = self.support().collect();
        for (i, a) in support.iter().enumerate() {
            for b in &support[i + 1..] {
                if a.commutes(b).expect("same n") {
                    return Some((*a, *b));
                }
            }
        }
        None
    }

    pub fn to_expansion(&self) -> PauliExpansion {
        let mut e = PauliExpansion::zero(self.n).expect("valid n");
        if self.identity_offset != 0.0 {
            e.insert_code(0, Complex64::new(self.identity_offset, 0.0));
        }
        for (&k, &h) in &self.terms {
            e.insert_code(k, Complex64::new(h, 0.0));
        }
        e
    }

    /// Text or JSON; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json_str(text)
        } else {
            parse_hamiltonian(text)
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(text)?;
        let mut h = Self::new(file.n)?;
        for (i, term) in file.terms.iter().enumerate() {
            let p = parse_string(&term.pauli)?;
            if p.num_qubits() != file.n {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!(
                        "term {:?} has {} qubits, file declares n = {}",
                        term.pauli,
                        p.num_qubits(),
                        file.n
                    ),
                });
            }
            h.add_term(&p, term.coeff)?;
        }
        Ok(h)
    }

    pub fn to_json(&self, alphabet: Alphabet) -> HamiltonianFile {
        let mut terms = Vec::with_capacity(self.terms.len() + 1);
        if self.identity_offset != 0.0 {
            terms.push(HamiltonianTerm {
                coeff: self.identity_offset,
                pauli: PauliString::identity(self.n)
                    .expect("valid n")
                    .format(alphabet),
            });
        }
        terms.extend(self.support().map(|p| HamiltonianTerm {
            coeff: self.coefficient(p.code()),
            pauli: p.format(alphabet),
        }));
        HamiltonianFile { n: self.n, terms }
    }

    /// One `<coefficient> <string>` line per term.
    pub fn to_text(&self, alphabet: Alphabet) -> String {
        self.to_json(alphabet)
            .terms
            .iter()
            .map(|t| format!("{:.16e} {}\n", t.coeff, t.pauli))
            .collect()
    }
}

impl PauliTerms for SparseHamiltonian {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn pauli_terms(&self) -> Vec<(u64, Complex64)> {
        self.to_expansion().iter().collect()
    }
}

/// JSON form of a Hamiltonian file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub n: usize,
    pub terms: Vec<HamiltonianTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerm {
    pub coeff: f64,
    pub pauli: String,
}

/// Parses the line format `<real coefficient> <pauli string>`, with `#`
/// comments and blank lines ignored.
pub fn parse_hamiltonian(text: &str) -> Result<SparseHamiltonian> {
    let mut h: Option<SparseHamiltonian> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |reason: String| Error::Parse {
            line: line_no,
            reason,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [coeff_text, pauli_text] = fields[..] else {
            return Err(err(format!(
                "expected `<coefficient> <pauli string>`, got {line:?}"
            )));
        };
        let coeff = parse_real(coeff_text).map_err(err)?;
        let p = parse_string(pauli_text).map_err(|e| err(e.to_string()))?;
        let h = match &mut h {
            Some(h) => {
                if h.num_qubits() != p.num_qubits() {
                    return Err(err(format!(
                        "inconsistent string length: {pauli_text:?} has {} qubits, expected {}",
                        p.num_qubits(),
                        h.num_qubits()
                    )));
                }
                h
            }
            None => h.insert(SparseHamiltonian::new(p.num_qubits())?),
        };
        h.add_term(&p, coeff).map_err(|e| err(e.to_string()))?;
    }
    h.ok_or(Error::Parse {
        line: 0,
        reason: "no terms; cannot infer the qubit count".into(),
    })
}

fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let normalized = text.replace('\u{2212}', "-");
    if normalized.ends_with(['i', 'j']) && !normalized.eq_ignore_ascii_case("inf") {
        return Err(format!("coefficient {text:?} is not real"));
    }
    match normalized.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err(format!("coefficient {text:?} is not finite")),
        Err(_) => Err(format!("malformed coefficient {text:?}")),
    }
}

/// Composition-closed term set `T = {K_1 < ... < K_τ}`; the identity is
/// implicit and never listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedTermSet {
    n: usize,
    codes: Vec<u64>,
}

impl ClosedTermSet {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> usize {
        self.codes.len()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn strings(&self) -> impl Iterator<Item = PauliString> + '_ {
        let n = self.n;
        self.codes
            .iter()
            .map(move |&k| PauliString::new(n, k).expect("stored codes fit n"))
    }

    /// Index of `code` in the ordered list.
    pub fn position(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok()
    }

    pub fn contains(&self, code: u64) -> bool {
        code == 0 || self.position(code).is_some()
    }

    /// Checks the closure property pair by pair.
    pub fn verify_closed(&self) -> Result<()> {
        for (i, &a) in self.codes.iter().enumerate() {
            for &b in &self.codes[i..] {
                if !self.contains(a ^ b) {
                    let s = |k| PauliString::new(self.n, k).expect("fits").to_string();
                    return Err(Error::NotClosed {
                        left: s(a),
                        right: s(b),
                        product: s(a ^ b),
                    });
                }
            }
        }
        Ok(())
    }

    /// Wraps a code list that is already known to be closed (checked).
    pub fn from_codes(n: usize, mut codes: Vec<u64>) -> Result<Self> {
        check_qubits(n)?;
        codes.sort_unstable();
        codes.dedup();
        codes.retain(|&k| k != 0);
        for &k in &codes {
            PauliString::new(n, k)?;
        }
        let set = Self { n, codes };
        set.verify_closed()?;
        Ok(set)
    }
}

/// Smallest composition-closed superset of the Hamiltonian's support.
pub fn close(h: &SparseHamiltonian, cap: usize) -> Result<ClosedTermSet> {
    close_codes(h.num_qubits(), h.terms().map(|(k, _)| k), cap)
}

/// Closure of an arbitrary code set. Fails once more than `cap` codes are reached.
pub fn close_codes<I>(n: usize, codes: I, cap: usize) -> Result<ClosedTermSet>
where
    I: IntoIterator<Item = u64>,
{
    check_qubits(n)?;
    let mut seen = BTreeSet::new();
    let mut members = Vec::new();
    for k in codes {
        PauliString::new(n, k)?;
        if k != 0 && seen.insert(k) {
            members.push(k);
        }
    }
    if members.len() > cap {
        return Err(Error::ClosureExplosion {
            cap,
            reached: members.len(),
        });
    }
    // Each member is composed with every member before it (and itself) once.
    let mut next = 0;
    while next < members.len() {
        let x = members[next];
        for j in 0..=next {
            let product = x ^ members[j];
            if product != 0 && seen.insert(product) {
                members.push(product);
                if members.len() > cap {
                    return Err(Error::ClosureExplosion {
                        cap,
                        reached: members.len(),
                    });
                }
            }
        }
        next += 1;
    }
    Ok(ClosedTermSet {
        n,
        codes: seen.into_iter().collect(),
    })
}

/// Result of decomposing a dense operator into the Pauli basis.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Hermitian(SparseHamiltonian),
    General(PauliExpansion),
}

impl Decomposition {
    pub fn to_expansion(&self) -> PauliExpansion {
        match self {
            Decomposition::Hermitian(h) => h.to_expansion(),
            Decomposition::General(e) => e.clone(),
        }
    }
}

/// `c_K = tr(σ_K m) / 2^n` for all `4^n` strings, keeping `|c_K| > zero_tol`.
/// Hermitian input (within `HERMITIAN_TOL`) yields a real `SparseHamiltonian`.
pub fn pauli_decompose(m: &DenseOperator, zero_tol: f64, exec: Exec) -> Result<Decomposition> {
    let n = m.num_qubits();
    if 2 * n >= usize::BITS as usize {
        return Err(Error::DenseCapExceeded { n, cap: 31 });
    }
    let dim = m.dim();
    let count = 1usize << (2 * n);
    let inv_dim = 1.0 / dim as f64;
    let coeffs = exec.map(count, |k| pauli_trace(m, k as u64) * inv_dim);
    let kept = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > zero_tol);

    if m.hermitian_deviation() <= HERMITIAN_TOL {
        let mut h = SparseHamiltonian::new(n)?;
        for (k, c) in kept {
            h.add_term(&PauliString::new(n, k as u64)?, c.re)?;
        }
        Ok(Decomposition::Hermitian(h))
    } else {
        let mut e = PauliExpansion::zero(n)?;
        for (k, c) in kept {
            e.insert_code(k as u64, c);
        }
        Ok(Decomposition::General(e))
    }
}

/// `tr(σ_K m)`. Row `r` of `σ_K` has its single nonzero in column `r ^ x`.
fn pauli_trace(m: &DenseOperator, code: u64) -> Complex64 {
    let n = m.num_qubits();
    let (mut x_mask, mut y_mask, mut z_mask) = (0usize, 0usize, 0usize);
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        match (code >> (2 * (n - 1 - q))) & 3 {
            1 => x_mask |= bit,
            2 => {
                x_mask |= bit;
                y_mask |= bit;
            }
            3 => z_mask |= bit,
            _ => {}
        }
    }
    let y_count = y_mask.count_ones() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..m.dim() {
        let c = r ^ x_mask;
        // Y contributes -i on |0> rows and +i on |1> rows; Z contributes -1 on |1>.
        let y_set = (r & y_mask).count_ones() as i64;
        let z_set = (r & z_mask).count_ones() as i64;
        let exponent = (2 * y_set - y_count + 2 * z_set).rem_euclid(4);
        let entry = m.get(c, r);
        acc += match exponent {
            0 => entry,
            1 => Complex64::new(-entry.im, entry.re),
            2 => -entry,
            _ => Complex64::new(entry.im, -entry.re),
        };
    }
    acc
}

/// Places a `dim x dim` matrix in the top-left block of a `2^n` register,
/// mapping `|i~>` to the computational state `|i>`.
pub fn embed(entries: &[Complex64], dim: usize, n: usize) -> Result<DenseOperator> {
    check_qubits(n)?;
    if entries.len() != dim * dim {
        return Err(Error::ShapeMismatch {
            left: entries.len(),
            right: dim * dim,
        });
    }
    if n >= usize::BITS as usize / 2 || dim > (1usize << n) {
        return Err(Error::EmbedTooLarge { dim, n });
    }
    let mut out = DenseOperator::zeros(n)?;
    for r in 0..dim {
        for c in 0..dim {
            out.set(r, c, entries[r * dim + c]);
        }
    }
    Ok(out)
}
