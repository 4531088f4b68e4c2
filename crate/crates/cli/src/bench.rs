//! Wall-time measurements as CSV: one row per (method, family, n, τ).
//!
//! `spectral` rows time the whole coefficient computation (closure, assembly
//! of A, eigendecomposition, coefficient vector) with no dense step. `dense`
//! rows time Kronecker reconstruction plus the dense exponential.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use pauliexp::models::{binary_strings, padded_cluster, scrambled_coefficient};
use pauliexp::{DenseOracle, Engine, SparseHamiltonian};

use crate::args::BenchArgs;
use crate::error::{CliError, CliResult, Exit, Stage};

/// Coefficients of the fixed τ = 7 pattern.
pub const CLUSTER_COEFFS: [f64; 7] = [0.9, -0.4, 0.8, 0.3, -0.6, 0.5, 0.2];

pub const HEADER: &str = "method,family,n,tau,reps,median_s,min_s";

struct Timing {
    reps: usize,
    median: f64,
    min: f64,
}

/// Repeats `f` until `max_reps` runs or `budget` seconds, whichever comes first.
fn time<F: FnMut()>(mut f: F, max_reps: usize, budget: f64) -> Timing {
    let start = Instant::now();
    let mut samples = Vec::new();
    while samples.len() < max_reps.max(1) {
        let t = Instant::now();
        f();
        samples.push(t.elapsed().as_secs_f64());
        if start.elapsed().as_secs_f64() >= budget {
            break;
        }
    }
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    let median = if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    };
    Timing {
        reps: samples.len(),
        median,
        min: samples[0],
    }
}

fn cluster(n: usize) -> CliResult<SparseHamiltonian> {
    padded_cluster(n, CLUSTER_COEFFS).stage("bench")
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let beta = Complex64::new(1.0, 0.0);
    let engine = Engine::default();
    let oracle = DenseOracle::with_cap(args.dense_cap).stage("config")?;
    if let Some(&n) = args.dense_n.iter().find(|&&n| n > oracle.cap()) {
        return Err(CliError::from_lib(
            "config",
            pauliexp::Error::DenseCapExceeded {
                n,
                cap: oracle.cap(),
            },
        ));
    }
    if let Some(&k) = args.k_values.iter().find(|&&k| k > args.tau_n) {
        return Err(CliError::new(
            Exit::Parse,
            "bench",
            format!("k = {k} exceeds --tau-n {}", args.tau_n),
        ));
    }

    if let Some(&n) = args.n_values.iter().chain(&args.dense_n).find(|&&n| n < 4) {
        return Err(CliError::new(
            Exit::Parse,
            "bench",
            format!("the τ = 7 pattern needs n >= 4, got {n}"),
        ));
    }

    let mut out = std::io::stdout().lock();
    writeln!(out, "{HEADER}").map_err(|e| CliError::io("output", "stdout", e))?;
    let mut row = |method: &str, family: &str, h: &SparseHamiltonian, tau: usize, t: Timing| {
        writeln!(
            out,
            "{method},{family},{},{tau},{},{:.6e},{:.6e}",
            h.num_qubits(),
            t.reps,
            t.median,
            t.min
        )
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("output", "stdout", e))
    };

    for &n in &args.n_values {
        let h = cluster(n)?;
        let tau = engine.structure(&h).stage("closure")?.size() - 1;
        let t = time(
            || drop(black_box(engine.exp_spectral(&h, beta))),
            args.reps,
            args.budget,
        );
        row("spectral", "cluster", &h, tau, t)?;
    }
    if !args.no_tau_sweep {
        for &k in &args.k_values {
            let h = binary_strings(args.tau_n, k, scrambled_coefficient).stage("bench")?;
            let tau = engine.structure(&h).stage("closure")?.size() - 1;
            let t = time(
                || drop(black_box(engine.exp_spectral(&h, beta))),
                args.reps,
                args.budget,
            );
            row("spectral", "binary", &h, tau, t)?;
        }
    }
    for &n in &args.dense_n {
        let h = cluster(n)?;
        let mut failure = None;
        let t = time(
            || {
                let result = oracle.reconstruct(&h).and_then(|m| oracle.exp(&m, beta));
                if let Err(e) = result {
                    failure = Some(e);
                }
            },
            args.reps,
            args.budget,
        );
        if let Some(e) = failure {
            return Err(CliError::from_lib("dense", e));
        }
        row("dense", "cluster", &h, 7, t)?;
    }
    Ok(())
}
