use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pauliexp::dense::DEFAULT_DENSE_CAP;
use pauliexp::engine::DEFAULT_CONTOUR_NODES;
use pauliexp::hamiltonian::{DEFAULT_CLOSURE_CAP, DEFAULT_ZERO_TOL};
use pauliexp::Alphabet;

use crate::complex::parse_complex;

#[derive(Debug, Parser)]
#[command(
    name = "pauliexp",
    version,
    about = "Exponentials of Pauli-sparse Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pauli coefficients of exp(-βH).
    Exp(ExpArgs),
    /// Partition function over a grid of real β.
    Partition(PartitionArgs),
    /// Gibbs state exp(-βH) / tr exp(-βH).
    Gibbs(GibbsArgs),
    /// Compare a sparse path against the dense exponential.
    Verify(VerifyArgs),
    /// Wall-time scaling in n and τ, as CSV.
    Bench(BenchArgs),
    /// Pauli decomposition of a dense matrix.
    Decompose(DecomposeArgs),
    /// Closed term set of a Hamiltonian and its size τ.
    Closure(ClosureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Anticommuting closed form when its precondition holds, else spectral.
    Auto,
    Spectral,
    Contour,
    Anticommute,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    PauliJson,
    PauliText,
    DenseJson,
    DenseBin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    Digits,
    Letters,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Digits => Alphabet::Digits,
            AlphabetArg::Letters => Alphabet::Letters,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Json,
}

/// Hamiltonian input shared by every subcommand that reads one.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Hamiltonian file (text or JSON); `-` reads stdin.
    #[arg(short, long)]
    pub input: String,
    /// Largest closed term set accepted.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    pub closure_cap: usize,
    /// Pauli string alphabet for output.
    #[arg(long, value_enum, default_value_t = AlphabetArg::Digits)]
    pub alphabet: AlphabetArg,
}

/// β as a complex number, or a time `t` meaning β = it.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BetaArgs {
    /// Complex β: "1.5", "1.5+0.3i", "i", "-2i".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Option<Complex64>,
    /// Evolution time; sets β = it.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
}

impl BetaArgs {
    pub fn value(&self) -> Complex64 {
        match (self.beta, self.time) {
            (Some(b), _) => b,
            (None, Some(t)) => Complex64::new(0.0, t),
            (None, None) => unreachable!("clap requires one of --beta/--time"),
        }
    }
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    /// Quadrature nodes on the contour.
    #[arg(long, default_value_t = DEFAULT_CONTOUR_NODES)]
    pub nodes: usize,
    /// Contour center (complex); defaults to the Gershgorin midpoint.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub center: Option<Complex64>,
    /// Contour radius; defaults to 1.25 x half the Gershgorin spread + 1.
    #[arg(long)]
    pub radius: Option<f64>,
}

impl ContourArgs {
    pub fn spec(&self) -> pauliexp::ContourSpec {
        pauliexp::ContourSpec {
            center: self.center,
            radius: self.radius,
            nodes: self.nodes,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub beta: BetaArgs,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = OutputFormat::PauliJson)]
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub contour: ContourArgs,
    /// Qubit limit for dense computations and dense output (at most 12).
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
    /// Drop output coefficients with modulus at or below this value.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tol: f64,
    /// Also write the structure matrix A as JSON to this path.
    #[arg(long)]
    pub dump_structure: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Real inverse temperatures, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub beta: Vec<f64>,
    /// Also print the Gibbs coefficients for each β.
    #[arg(long)]
    pub gibbs: bool,
    /// Check that Z is unchanged when these terms change sign.
    #[arg(long, value_delimiter = ',')]
    pub flip: Vec<String>,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Real inverse temperature.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::PauliJson)]
    pub format: OutputFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub beta: BetaArgs,
    /// Sparse path under test; `dense` is not allowed.
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[command(flatten)]
    pub contour: ContourArgs,
    /// Largest accepted entrywise error.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
    /// Flip the sign of the largest sparse coefficient before comparing (negative control).
    #[arg(long)]
    pub corrupt: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Qubit counts for the fixed τ = 7 pattern.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12,16,24,32")]
    pub n_values: Vec<usize>,
    /// Sizes k of the {I,X}^k family (τ = 2^k - 1) for the τ sweep.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8")]
    pub k_values: Vec<usize>,
    /// Qubit count for the τ sweep.
    #[arg(long, default_value_t = 12)]
    pub tau_n: usize,
    /// Qubit counts timed with the dense method.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8")]
    pub dense_n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
    /// Upper bound on repetitions per row.
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    /// Time budget per row in seconds; at least one repetition always runs.
    #[arg(long, default_value_t = 0.5)]
    pub budget: f64,
    /// Skip the τ sweep.
    #[arg(long)]
    pub no_tau_sweep: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Dense matrix: JSON nested arrays (entries real or [re, im]) or PEXP binary.
    #[arg(short, long)]
    pub input: String,
    /// Embed a non-power-of-two matrix into this many qubits.
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
    #[arg(long, value_enum, default_value_t = AlphabetArg::Digits)]
    pub alphabet: AlphabetArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,
}
