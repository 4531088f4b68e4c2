//! Pauli coefficients of `exp(-β H)`.
//!
//! The resolvent coefficient vector is `r(z) = (z I - A)^{-1} e_0`, so the
//! contour integral `(1/2πi) ∮ e^{-βz} r(z) dz` around the spectrum equals
//! the sum of residues of `e^{-βz} r(z)` at the eigenvalues of `A`, which is
//! exactly the first column of `exp(-β A)`:
//!
//! ```text
//! c_K = Σ_j e^{-β λ_j} V[K][j] conj(V[0][j]),    A = V diag(λ) V^H
//! ```
//!
//! This is the spectral path. Degenerate eigenvalues need no special care:
//! the weight `V[K][j] conj(V[0][j])` summed over an eigenspace is the
//! residue of the reduced fraction. The contour path evaluates the same
//! integral by the trapezoidal rule on a circle and is kept as an
//! independent check. Anticommuting Hamiltonians have a closed form.

use std::f64::consts::{LN_2, PI};

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expansion::PauliExpansion;
use crate::hamiltonian::{close, SparseHamiltonian, DEFAULT_CLOSURE_CAP};
use crate::resolvent::{build_structure_matrix_with, resolvent_at, StructureMatrix};

pub const DEFAULT_CONTOUR_NODES: usize = 64;

/// Eigendecomposition `A = V diag(λ) V^H`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<Complex64>,
}

impl SpectralData {
    pub fn compute(a: &StructureMatrix) -> Result<Self> {
        let evd = a
            .as_mat()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let eigenvalues: Vec<f64> = (0..a.size()).map(|j| evd.S()[j].re).collect();
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::Eigen("non-finite eigenvalue".into()));
        }
        Ok(Self {
            eigenvalues,
            eigenvectors: evd.U().to_owned(),
        })
    }

    /// `|V[0][j]|^2`: how much eigenvalue `j` contributes to the identity row.
    pub fn weight(&self, j: usize) -> f64 {
        self.eigenvectors[(0, j)].norm_sqr()
    }

    /// `max |A V - V diag(λ)|`.
    pub fn residual(&self, a: &StructureMatrix) -> f64 {
        let av = a.as_mat() * &self.eigenvectors;
        let size = a.size();
        let mut worst = 0.0f64;
        for r in 0..size {
            for c in 0..size {
                let d = av[(r, c)] - self.eigenvectors[(r, c)] * self.eigenvalues[c];
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `max |V^H V - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let size = gram.nrows();
        let mut worst = 0.0f64;
        for r in 0..size {
            for c in 0..size {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - target).norm());
            }
        }
        worst
    }

    /// `f(A) e_0 = Σ_j f(λ_j) V[:, j] conj(V[0][j])`.
    pub fn apply_to_e0<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        let size = self.eigenvalues.len();
        let mut out = vec![Complex64::new(0.0, 0.0); size];
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let w = f(l) * self.eigenvectors[(0, j)].conj();
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += self.eigenvectors[(k, j)] * w;
            }
        }
        out
    }
}

/// Integration circle for the contour path. `None` fields take defaults
/// derived from the Gershgorin bounds of `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub center: Option<Complex64>,
    pub radius: Option<f64>,
    pub nodes: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            center: None,
            radius: None,
            nodes: DEFAULT_CONTOUR_NODES,
        }
    }
}

impl ContourSpec {
    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            nodes,
            ..Self::default()
        }
    }

    /// Concrete `(center, radius)` for `a`, checked to enclose its Gershgorin interval.
    pub fn resolve(&self, a: &StructureMatrix) -> Result<(Complex64, f64)> {
        let (lo, hi) = a.gershgorin_bounds();
        let center = self.center.unwrap_or(Complex64::new(0.5 * (lo + hi), 0.0));
        let radius = self.radius.unwrap_or(0.5 * (hi - lo) * 1.25 + 1.0);
        if self.nodes == 0 {
            return Err(Error::BadContour("at least one node is required".into()));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::BadContour(format!("invalid radius {radius}")));
        }
        let reach = (Complex64::new(lo, 0.0) - center)
            .norm()
            .max((Complex64::new(hi, 0.0) - center).norm());
        if reach >= radius {
            return Err(Error::BadContour(format!(
                "circle |z - {center}| = {radius} does not enclose the Gershgorin interval [{lo}, {hi}]"
            )));
        }
        Ok((center, radius))
    }
}

/// `Z = tr exp(-βH)` in both conventions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionFunction {
    pub beta: f64,
    /// Identity coefficient `c_0 = tr exp(-βH) / 2^n`.
    pub normalized: f64,
    /// `tr exp(-βH) = 2^n c_0`.
    pub trace: f64,
    /// `ln tr exp(-βH)`, computed without overflow.
    pub log_trace: f64,
}

impl PartitionFunction {
    /// `-ln Z / β`; undefined at `β = 0`.
    pub fn free_energy(&self) -> Option<f64> {
        (self.beta != 0.0).then(|| -self.log_trace / self.beta)
    }
}

/// Entry point for the exponential computations.
#[derive(Clone, Copy, Debug)]
pub struct Engine {
    pub closure_cap: usize,
    pub exec: Exec,
}

impl Default for Engine {
    fn default() -> Self {
        Self {
            closure_cap: DEFAULT_CLOSURE_CAP,
            exec: Exec::default(),
        }
    }
}

impl Engine {
    pub fn with_closure_cap(closure_cap: usize) -> Self {
        Self {
            closure_cap,
            ..Self::default()
        }
    }

    pub fn exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Closes the support and assembles `A`.
    pub fn structure(&self, h: &SparseHamiltonian) -> Result<StructureMatrix> {
        let set = close(h, self.closure_cap)?;
        build_structure_matrix_with(h, &set, self.exec)
    }

    /// Spectral (residue) path.
    pub fn exp_spectral(&self, h: &SparseHamiltonian, beta: Complex64) -> Result<PauliExpansion> {
        let a = self.structure(h)?;
        let spectral = SpectralData::compute(&a)?;
        Ok(exp_from_spectrum(h, &a, &spectral, beta))
    }

    /// Trapezoidal quadrature of the resolvent integral on a circle.
    pub fn exp_contour(
        &self,
        h: &SparseHamiltonian,
        beta: Complex64,
        spec: &ContourSpec,
    ) -> Result<PauliExpansion> {
        let a = self.structure(h)?;
        let (center, radius) = spec.resolve(&a)?;
        let vector = match self.contour_sum(&a, beta, center, radius, spec.nodes) {
            Err(Error::SingularSystem { .. }) => {
                self.contour_sum(&a, beta, center, radius * 1.01, spec.nodes)?
            }
            other => other?,
        };
        let offset = (-beta * h.identity_offset()).exp();
        Ok(vector_to_expansion(&a, &vector, offset))
    }

    fn contour_sum(
        &self,
        a: &StructureMatrix,
        beta: Complex64,
        center: Complex64,
        radius: f64,
        nodes: usize,
    ) -> Result<Vec<Complex64>> {
        let contributions = self.exec.map(nodes, |m| -> Result<Vec<Complex64>> {
            let theta = 2.0 * PI * m as f64 / nodes as f64;
            let w = Complex64::from_polar(radius, theta);
            let z = center + w;
            let r = resolvent_at(a, z)?;
            let factor = w * (-beta * z).exp();
            Ok(r.r.into_iter().map(|x| x * factor).collect())
        });
        let mut sum = vec![Complex64::new(0.0, 0.0); a.size()];
        for contribution in contributions {
            for (s, x) in sum.iter_mut().zip(contribution?) {
                *s += x;
            }
        }
        let scale = 1.0 / nodes as f64;
        Ok(sum.into_iter().map(|x| x * scale).collect())
    }

    /// Partition function at real `beta`.
    pub fn partition_function(
        &self,
        h: &SparseHamiltonian,
        beta: f64,
    ) -> Result<PartitionFunction> {
        let a = self.structure(h)?;
        let spectral = SpectralData::compute(&a)?;
        Ok(partition_from_spectrum(h, &spectral, beta))
    }

    /// `exp(-βH) / tr exp(-βH)`; the identity coefficient is `2^{-n}`.
    pub fn gibbs_state(&self, h: &SparseHamiltonian, beta: f64) -> Result<PauliExpansion> {
        let a = self.structure(h)?;
        let spectral = SpectralData::compute(&a)?;
        // Shifting the spectrum by its minimum cancels in the ratio and
        // keeps the exponentials bounded by one.
        let shift = spectral.eigenvalues.first().copied().unwrap_or(0.0);
        let vector = spectral.apply_to_e0(|l| Complex64::new((-beta * (l - shift)).exp(), 0.0));
        let dim = (h.num_qubits() as f64 * LN_2).exp();
        let scale = 1.0 / (dim * vector[0].re);
        Ok(vector_to_expansion(&a, &vector, Complex64::new(scale, 0.0)))
    }
}

/// Closed form for pairwise anticommuting support:
/// `exp(-βH) = cosh(hβ) I - sinh(hβ)/h H`, `h = (Σ h_K^2)^{1/2}`.
pub fn exp_anticommuting(h: &SparseHamiltonian, beta: Complex64) -> Result<PauliExpansion> {
    if let Some((left, right)) = h.first_commuting_pair() {
        return Err(Error::NotAnticommuting {
            left: left.to_string(),
            right: right.to_string(),
        });
    }
    let offset = (-beta * h.identity_offset()).exp();
    let norm = h.norm();
    let mut e = PauliExpansion::zero(h.num_qubits())?;
    if norm == 0.0 {
        e.insert_code(0, offset);
        return Ok(e);
    }
    let x = beta * norm;
    e.insert_code(0, x.cosh() * offset);
    let ratio = -x.sinh() / norm * offset;
    for (k, coeff) in h.terms() {
        e.insert_code(k, ratio * coeff);
    }
    Ok(e)
}

/// Coefficients `exp(-βA) e_0` mapped back onto Pauli codes, times `e^{-β h_0}`.
pub fn exp_from_spectrum(
    h: &SparseHamiltonian,
    a: &StructureMatrix,
    spectral: &SpectralData,
    beta: Complex64,
) -> PauliExpansion {
    let vector = spectral.apply_to_e0(|l| (-beta * l).exp());
    let offset = (-beta * h.identity_offset()).exp();
    vector_to_expansion(a, &vector, offset)
}

pub fn partition_from_spectrum(
    h: &SparseHamiltonian,
    spectral: &SpectralData,
    beta: f64,
) -> PartitionFunction {
    let shift = spectral.eigenvalues.first().copied().unwrap_or(0.0);
    let shifted: f64 = spectral
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &l)| (-beta * (l - shift)).exp() * spectral.weight(j))
        .sum();
    let log_normalized = shifted.ln() - beta * (shift + h.identity_offset());
    let log_trace = h.num_qubits() as f64 * LN_2 + log_normalized;
    PartitionFunction {
        beta,
        normalized: log_normalized.exp(),
        trace: log_trace.exp(),
        log_trace,
    }
}

fn vector_to_expansion(
    a: &StructureMatrix,
    vector: &[Complex64],
    scale: Complex64,
) -> PauliExpansion {
    let mut e = PauliExpansion::zero(a.num_qubits()).expect("valid n");
    for (i, &x) in vector.iter().enumerate() {
        e.insert_code(a.code_at(i), x * scale);
    }
    e
}

/// [`Engine::exp_spectral`] with default settings.
pub fn exp_spectral(h: &SparseHamiltonian, beta: Complex64) -> Result<PauliExpansion> {
    Engine::default().exp_spectral(h, beta)
}

/// [`Engine::exp_contour`] with default settings.
pub fn exp_contour(
    h: &SparseHamiltonian,
    beta: Complex64,
    spec: &ContourSpec,
) -> Result<PauliExpansion> {
    Engine::default().exp_contour(h, beta, spec)
}

/// [`Engine::partition_function`] with default settings.
pub fn partition_function(h: &SparseHamiltonian, beta: f64) -> Result<PartitionFunction> {
    Engine::default().partition_function(h, beta)
}

/// [`Engine::gibbs_state`] with default settings.
pub fn gibbs_state(h: &SparseHamiltonian, beta: f64) -> Result<PauliExpansion> {
    Engine::default().gibbs_state(h, beta)
}
