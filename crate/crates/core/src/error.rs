use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid qubit count {0} (supported: 1..={max})", max = crate::pauli::MAX_QUBITS)]
    InvalidQubitCount(usize),

    #[error("invalid Pauli string {text:?}: {reason}")]
    InvalidPauli { text: String, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("closure exceeded cap of {cap} terms (reached {reached}); the Hamiltonian is not sparse in the Pauli basis")]
    ClosureExplosion { cap: usize, reached: usize },

    #[error("term set is not closed: {left} * {right} = {product} is missing")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },

    #[error("term {0} is not in the closed term set")]
    TermOutsideSet(String),

    #[error("structure matrix is not Hermitian at ({row}, {col})")]
    NotHermitianStructure { row: usize, col: usize },

    #[error("resolvent system is singular at z = {z} (residual {residual:e})")]
    SingularSystem { z: Complex64, residual: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("{left} and {right} commute; the anticommuting closed form does not apply")]
    NotAnticommuting { left: String, right: String },

    #[error("contour does not enclose the spectrum: {0}")]
    BadContour(String),

    #[error("{n} qubits exceeds the dense cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("matrix is not Hermitian (max |m - m^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("cannot embed a {dim}x{dim} matrix into {n} qubits")]
    EmbedTooLarge { dim: usize, n: usize },

    #[error("dense dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("invalid dense matrix: {0}")]
    InvalidMatrix(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
