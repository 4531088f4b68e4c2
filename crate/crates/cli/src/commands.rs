use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use pauliexp::engine::{exp_from_spectrum, partition_from_spectrum, SpectralData};
use pauliexp::format::{expansion_json, expansion_text, to_json_string, unsigned_zero};
use pauliexp::hamiltonian::DEFAULT_ZERO_TOL;
use pauliexp::{
    close, compare, embed, exp_anticommuting, parse_string, pauli_decompose, Alphabet,
    Decomposition, DenseOperator, DenseOracle, Engine, Exec, PauliExpansion, SparseHamiltonian,
    SquareMatrix,
};
use serde_json::json;

use crate::args::{
    ClosureArgs, ContourArgs, DecomposeArgs, ExpArgs, GibbsArgs, InputArgs, Method, OutputFormat,
    PartitionArgs, TableFormat, VerifyArgs,
};
use crate::error::{CliError, CliResult, Exit, Stage};

/// Relative tolerance of the `partition --flip` invariance check.
const SYMMETRY_TOL: f64 = 1e-10;

pub fn read_input(path: &str) -> CliResult<Vec<u8>> {
    let mut bytes = Vec::new();
    let result = if path == "-" {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes).map(|_| ()))
    };
    result.map_err(|e| CliError::io("input", path, e))?;
    Ok(bytes)
}

pub fn load_hamiltonian(input: &InputArgs) -> CliResult<SparseHamiltonian> {
    let bytes = read_input(&input.input)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::new(Exit::Parse, "parse", format!("{}: not UTF-8", input.input)))?;
    SparseHamiltonian::parse(&text)
        .map_err(|e| CliError::new(Exit::Parse, "parse", format!("{}: {e}", input.input)))
}

pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| CliError::io("output", &p.display().to_string(), e))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("output", "stdout", e))
        }
    }
}

fn dense_oracle(cap: usize) -> CliResult<DenseOracle> {
    DenseOracle::with_cap(cap).stage("config")
}

/// `auto` picks the exact anticommuting form when it applies.
fn resolve_method(method: Method, h: &SparseHamiltonian) -> Method {
    match method {
        Method::Auto if h.is_anticommuting() => Method::Anticommute,
        Method::Auto => Method::Spectral,
        other => other,
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Auto => "auto",
        Method::Spectral => "spectral",
        Method::Contour => "contour",
        Method::Anticommute => "anticommute",
        Method::Dense => "dense",
    }
}

/// Result of a sparse path: the expansion and τ.
fn sparse_exp(
    h: &SparseHamiltonian,
    beta: Complex64,
    method: Method,
    engine: &Engine,
    contour: &ContourArgs,
) -> CliResult<(PauliExpansion, usize)> {
    match method {
        Method::Anticommute => Ok((exp_anticommuting(h, beta).stage("anticommute")?, h.len())),
        Method::Spectral => {
            let a = engine.structure(h).stage("closure")?;
            let spectral = SpectralData::compute(&a).stage("eigensolver")?;
            Ok((exp_from_spectrum(h, &a, &spectral, beta), a.size() - 1))
        }
        Method::Contour => {
            let tau = engine.structure(h).stage("closure")?.size() - 1;
            Ok((
                engine
                    .exp_contour(h, beta, &contour.spec())
                    .stage("contour")?,
                tau,
            ))
        }
        Method::Auto | Method::Dense => unreachable!("resolved before dispatch"),
    }
}

fn expansion_bytes(
    e: &PauliExpansion,
    beta: Complex64,
    format: OutputFormat,
    alphabet: Alphabet,
    dense_cap: usize,
) -> CliResult<Vec<u8>> {
    match format {
        OutputFormat::PauliJson => {
            Ok(format!("{}\n", expansion_json(e, beta, alphabet)).into_bytes())
        }
        OutputFormat::PauliText => Ok(expansion_text(e, beta, alphabet).into_bytes()),
        OutputFormat::DenseJson | OutputFormat::DenseBin => {
            let m = dense_oracle(dense_cap)?.reconstruct(e).stage("dense")?;
            dense_bytes(&m, format)
        }
    }
}

fn dense_bytes(m: &DenseOperator, format: OutputFormat) -> CliResult<Vec<u8>> {
    match format {
        OutputFormat::DenseJson => {
            Ok(format!("{}\n", to_json_string(&m.to_json()).expect("plain data")).into_bytes())
        }
        OutputFormat::DenseBin => {
            let mut out = Vec::new();
            m.write_binary(&mut out).stage("output")?;
            Ok(out)
        }
        _ => unreachable!("dense formats only"),
    }
}

pub fn cmd_exp(args: &ExpArgs) -> CliResult<()> {
    let h = load_hamiltonian(&args.input)?;
    let beta = args.beta.value();
    let alphabet = args.input.alphabet.into();
    let engine = Engine::with_closure_cap(args.input.closure_cap);
    if let Some(path) = &args.dump_structure {
        let a = engine.structure(&h).stage("closure")?;
        let text = format!("{}\n", to_json_string(&a.to_json()).expect("plain data"));
        emit(Some(path), text.as_bytes())?;
    }
    let method = resolve_method(args.method, &h);
    let bytes = if method == Method::Dense {
        let oracle = dense_oracle(args.dense_cap)?;
        let m = oracle.reconstruct(&h).stage("dense")?;
        let u = oracle.exp(&m, beta).stage("dense")?;
        match args.format {
            OutputFormat::DenseJson | OutputFormat::DenseBin => dense_bytes(&u, args.format)?,
            _ => {
                let tol = args.zero_tol.max(DEFAULT_ZERO_TOL);
                let e = pauli_decompose(&u, tol, Exec::default())
                    .stage("decompose")?
                    .to_expansion();
                expansion_bytes(&e, beta, args.format, alphabet, args.dense_cap)?
            }
        }
    } else {
        let (mut e, _) = sparse_exp(&h, beta, method, &engine, &args.contour)?;
        if args.zero_tol > 0.0 {
            e = e.pruned(args.zero_tol);
        }
        expansion_bytes(&e, beta, args.format, alphabet, args.dense_cap)?
    };
    emit(args.output.as_deref(), &bytes)
}

fn flipped(h: &SparseHamiltonian, strings: &[String]) -> CliResult<SparseHamiltonian> {
    let mut out = h.clone();
    for s in strings {
        let p = parse_string(s).stage("parse")?;
        if p.num_qubits() != h.num_qubits() || p.is_identity() || h.coefficient(p.code()) == 0.0 {
            return Err(CliError::new(
                Exit::Parse,
                "parse",
                format!("--flip {s}: not a term of the Hamiltonian"),
            ));
        }
        out.add_term(&p, -2.0 * out.coefficient(p.code()))
            .stage("parse")?;
    }
    Ok(out)
}

fn fixed(x: f64) -> String {
    format!("{:.16e}", unsigned_zero(x))
}

pub fn cmd_partition(args: &PartitionArgs) -> CliResult<()> {
    let h = load_hamiltonian(&args.input)?;
    let alphabet = args.input.alphabet.into();
    let engine = Engine::with_closure_cap(args.input.closure_cap);
    let a = engine.structure(&h).stage("closure")?;
    let spectral = SpectralData::compute(&a).stage("eigensolver")?;
    let rows: Vec<_> = args
        .beta
        .iter()
        .map(|&b| partition_from_spectrum(&h, &spectral, b))
        .collect();

    let symmetry = if args.flip.is_empty() {
        None
    } else {
        let g = flipped(&h, &args.flip)?;
        let ga = engine.structure(&g).stage("closure")?;
        let gs = SpectralData::compute(&ga).stage("eigensolver")?;
        let deviation = args
            .beta
            .iter()
            .zip(&rows)
            .map(|(&b, z)| {
                ((partition_from_spectrum(&g, &gs, b).log_trace - z.log_trace).exp_m1()).abs()
            })
            .fold(0.0, f64::max);
        Some(deviation)
    };

    let mut gibbs = Vec::new();
    if args.gibbs {
        for &b in &args.beta {
            gibbs.push(engine.gibbs_state(&h, b).stage("gibbs")?);
        }
    }

    let out = match args.format {
        TableFormat::Text => {
            let mut out = format!(
                "# n = {}, tau = {}\n# z_normalized = tr exp(-beta H) / 2^n; z_trace = tr exp(-beta H); free_energy = -ln(z_trace) / beta\n",
                h.num_qubits(),
                a.size() - 1
            );
            out.push_str(&format!(
                "{:>24}  {:>24}  {:>24}  {:>24}\n",
                "beta", "z_normalized", "z_trace", "free_energy"
            ));
            for z in &rows {
                let free = z.free_energy().map_or_else(|| "n/a".to_string(), fixed);
                out.push_str(&format!(
                    "{:>24}  {:>24}  {:>24}  {:>24}\n",
                    fixed(z.beta),
                    fixed(z.normalized),
                    fixed(z.trace),
                    free
                ));
            }
            if let Some(deviation) = symmetry {
                let verdict = if deviation <= SYMMETRY_TOL {
                    "invariant"
                } else {
                    "not invariant"
                };
                out.push_str(&format!(
                    "# symmetry: Z under sign flip of {}: {verdict} (max relative deviation {deviation:.3e})\n",
                    args.flip.join(",")
                ));
            }
            for (z, rho) in rows.iter().zip(&gibbs) {
                out.push_str(&format!("# gibbs state at beta = {}\n", fixed(z.beta)));
                out.push_str(&expansion_text(rho, Complex64::new(z.beta, 0.0), alphabet));
            }
            out
        }
        TableFormat::Json => {
            let table: Vec<_> = rows
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let mut row = json!({
                        "beta": z.beta,
                        "z_normalized": z.normalized,
                        "z_trace": z.trace,
                        "log_z_trace": z.log_trace,
                        "free_energy": z.free_energy(),
                    });
                    if let Some(rho) = gibbs.get(i) {
                        let coeffs: Vec<_> = rho
                            .strings()
                            .map(|(p, c)| json!({"pauli": p.format(alphabet), "re": c.re, "im": c.im}))
                            .collect();
                        row["gibbs"] = json!(coeffs);
                    }
                    row
                })
                .collect();
            let mut doc = json!({"n": h.num_qubits(), "tau": a.size() - 1, "rows": table});
            if let Some(deviation) = symmetry {
                doc["symmetry"] = json!({
                    "flip": args.flip,
                    "max_relative_deviation": deviation,
                    "invariant": deviation <= SYMMETRY_TOL,
                });
            }
            format!("{}\n", to_json_string(&doc).expect("plain data"))
        }
    };
    emit(None, out.as_bytes())
}

pub fn cmd_gibbs(args: &GibbsArgs) -> CliResult<()> {
    let h = load_hamiltonian(&args.input)?;
    let engine = Engine::with_closure_cap(args.input.closure_cap);
    let rho = engine.gibbs_state(&h, args.beta).map_err(|e| {
        let stage = if matches!(e, pauliexp::Error::ClosureExplosion { .. }) {
            "closure"
        } else {
            "gibbs"
        };
        CliError::from_lib(stage, e)
    })?;
    let bytes = expansion_bytes(
        &rho,
        Complex64::new(args.beta, 0.0),
        args.format,
        args.input.alphabet.into(),
        args.dense_cap,
    )?;
    emit(args.output.as_deref(), &bytes)
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let h = load_hamiltonian(&args.input)?;
    let beta = args.beta.value();
    let oracle = dense_oracle(args.dense_cap)?;
    if h.num_qubits() > oracle.cap() {
        return Err(CliError::from_lib(
            "config",
            pauliexp::Error::DenseCapExceeded {
                n: h.num_qubits(),
                cap: oracle.cap(),
            },
        ));
    }
    let method = resolve_method(args.method, &h);
    if method == Method::Dense {
        return Err(CliError::new(
            Exit::Precondition,
            "config",
            "verify compares a sparse path with the dense oracle; choose spectral, contour or anticommute",
        ));
    }
    let engine = Engine::with_closure_cap(args.input.closure_cap);
    let (mut e, tau) = sparse_exp(&h, beta, method, &engine, &args.contour)?;
    let mut report = format!(
        "method     {}\nn          {}\ntau        {}\nbeta       {:.16e} {:+.16e}i\n",
        method_name(method),
        h.num_qubits(),
        tau,
        unsigned_zero(beta.re),
        unsigned_zero(beta.im)
    );
    if args.corrupt {
        let (worst, c) = e
            .iter()
            .fold((0u64, Complex64::new(0.0, 0.0)), |best, (k, c)| {
                if c.norm() > best.1.norm() {
                    (k, c)
                } else {
                    best
                }
            });
        let p = pauliexp::PauliString::new(h.num_qubits(), worst).stage("verify")?;
        e.add(&p, -2.0 * c).stage("verify")?;
        report.push_str(&format!(
            "corrupted  {}\n",
            p.format(args.input.alphabet.into())
        ));
    }
    let sparse = oracle.reconstruct(&e).stage("dense")?;
    let dense = oracle
        .exp(&oracle.reconstruct(&h).stage("dense")?, beta)
        .stage("dense")?;
    let cmp = compare(&sparse, &dense).stage("compare")?;
    let pass = cmp.max_abs <= args.tol;
    report.push_str(&format!(
        "max_abs    {:.3e}\nfrobenius  {:.3e}\ntol        {:.3e}\n{}\n",
        cmp.max_abs,
        cmp.frobenius,
        args.tol,
        if pass { "PASS" } else { "FAIL" }
    ));
    emit(None, report.as_bytes())?;
    if pass {
        Ok(())
    } else {
        Err(CliError::new(
            Exit::VerifyFailed,
            "verify",
            format!(
                "max entrywise error {:.3e} exceeds {:.3e}",
                cmp.max_abs, args.tol
            ),
        ))
    }
}

fn read_dense(args: &DecomposeArgs) -> CliResult<DenseOperator> {
    let bytes = read_input(&args.input)?;
    let square = if bytes.starts_with(b"PEXP") {
        SquareMatrix::from(DenseOperator::read_binary(bytes.as_slice()).stage("parse")?)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| {
            CliError::new(Exit::Parse, "parse", format!("{}: not UTF-8", args.input))
        })?;
        SquareMatrix::from_json_str(&text).stage("parse")?
    };
    match args.qubits {
        Some(n) => embed(&square.data, square.dim, n).stage("embed"),
        None => square.into_operator().map_err(|e| {
            CliError::new(
                Exit::Parse,
                "parse",
                format!("{e}; pass --qubits to embed the matrix"),
            )
        }),
    }
}

pub fn cmd_decompose(args: &DecomposeArgs) -> CliResult<()> {
    let m = read_dense(args)?;
    let alphabet: Alphabet = args.alphabet.into();
    let decomposition = pauli_decompose(&m, args.zero_tol, Exec::default()).stage("decompose")?;
    let text = match (&decomposition, args.format) {
        (Decomposition::Hermitian(h), TableFormat::Text) => {
            format!(
                "# n = {}, hermitian\n{}",
                h.num_qubits(),
                h.to_text(alphabet)
            )
        }
        (Decomposition::Hermitian(h), TableFormat::Json) => {
            format!(
                "{}\n",
                to_json_string(&h.to_json(alphabet)).expect("plain data")
            )
        }
        (Decomposition::General(e), TableFormat::Text) => {
            let mut out = format!(
                "# n = {}, not hermitian; columns: re im pauli\n",
                e.num_qubits()
            );
            for (p, c) in e.strings() {
                out.push_str(&format!(
                    "{} {} {}\n",
                    fixed(c.re),
                    fixed(c.im),
                    p.format(alphabet)
                ));
            }
            out
        }
        (Decomposition::General(e), TableFormat::Json) => {
            let coeffs: Vec<_> = e
                .strings()
                .map(|(p, c)| json!({"pauli": p.format(alphabet), "re": c.re, "im": c.im}))
                .collect();
            let doc = json!({"n": e.num_qubits(), "hermitian": false, "coeffs": coeffs});
            format!("{}\n", to_json_string(&doc).expect("plain data"))
        }
    };
    emit(args.output.as_deref(), text.as_bytes())
}

pub fn cmd_closure(args: &ClosureArgs) -> CliResult<()> {
    let h = load_hamiltonian(&args.input)?;
    let alphabet: Alphabet = args.input.alphabet.into();
    let set = close(&h, args.input.closure_cap).stage("closure")?;
    let text = match args.format {
        TableFormat::Text => {
            let mut out = format!("# n = {}\n# tau = {}\n", h.num_qubits(), set.tau());
            for p in set.strings() {
                let added = if h.coefficient(p.code()) == 0.0 {
                    "  # added by closure"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "{} {}{added}\n",
                    fixed(h.coefficient(p.code())),
                    p.format(alphabet)
                ));
            }
            out
        }
        TableFormat::Json => {
            let terms: Vec<_> = set
                .strings()
                .map(|p| {
                    json!({
                        "pauli": p.format(alphabet),
                        "code": p.code(),
                        "coeff": h.coefficient(p.code()),
                        "added": h.coefficient(p.code()) == 0.0,
                    })
                })
                .collect();
            let doc = json!({"n": h.num_qubits(), "tau": set.tau(), "terms": terms});
            format!("{}\n", to_json_string(&doc).expect("plain data"))
        }
    };
    emit(None, text.as_bytes())
}
