//! Command-line front end. Parses state, circuit and Hamiltonian specs,
//! dispatches the encoders, estimators and scenario runners, and emits
//! deterministic tables: CSV for row-shaped results, pretty JSON for
//! reports, every float at 17 significant digits.
//!
//! Exit codes: 0 on success, 1 on any validation or parse error, 2 when
//! the invariant suite reports a failing check.

use clap::{Args, Parser, Subcommand, ValueEnum};
use matramp::encoders::PauliHamiltonian;
use matramp::estimators::{estimate_gamma_protocol, estimate_lambda_protocol, ProtocolEstimate};
use matramp::experiments::{
    build_a_states, build_b_states, gibbs_demo, io, random_two_local_hamiltonian,
    run_extreme_case, run_regime_sweep, two_design_check, AStateSpec, BStateSpec, BenchScenario,
    FactorSpec, Method, RegimeGrid, SweepRow, TrotterPoint,
};
use matramp::qcore::{qubits_for_dim, substream};
use matramp::verify::run_invariant_suite;
use matramp::{Error, Result};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "matramp",
    version,
    about = "Bipartite state encodings, channel compilations and query-complexity benchmarks on a dense simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct CommonOpts {
    /// Input spec file (JSON); schema depends on the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format; each subcommand has a natural default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build the density-side encoding from an A-state spec and
    /// measure its weight gamma.
    EncodeA {
        #[command(flatten)]
        common: CommonOpts,
        /// Shots for the weight protocol; exact contraction when absent.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Build the unitary-side encoding from a B-state spec and measure
    /// its scale lambda.
    EncodeB {
        #[command(flatten)]
        common: CommonOpts,
        /// Shots for the weight protocol; exact contraction when absent.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Run a benchmark scenario: every (method, seed) cell of the
    /// configured grid.
    Estimate {
        #[command(flatten)]
        common: CommonOpts,
        /// Override the scenario's target precision.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override the scenario's failure probability.
        #[arg(long)]
        delta: Option<f64>,
        /// Restrict the run to one method.
        #[arg(long)]
        method: Option<String>,
    },
    /// Engineered overlap benchmark with indirect/direct ratio checks.
    BenchExtreme {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Number of consecutive seeds starting at --seed.
        #[arg(long, default_value_t = 50)]
        seeds: u64,
    },
    /// Closed-form weight-product table across encoding regimes.
    RegimeSweep {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Distance of the averaged Bell two-copy ensemble from the Haar
    /// second moment.
    TwoDesign {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Monte-Carlo sample count; 0 skips the sampled cross-check.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Thermal-state weight demonstration with dense cross-checks.
    GibbsDemo {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Register width of the random Hamiltonian used when no
        /// --config is given.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Term count of the random Hamiltonian; defaults to 2n.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Run the full invariant suite; one line per check.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here and are not failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::EncodeA { common, shots } => encode_a(&common, shots),
        Command::EncodeB { common, shots } => encode_b(&common, shots),
        Command::Estimate {
            common,
            epsilon,
            delta,
            method,
        } => estimate(&common, epsilon, delta, method.as_deref()),
        Command::BenchExtreme {
            common,
            n,
            epsilon,
            delta,
            seeds,
        } => bench_extreme(&common, n, epsilon, delta, seeds),
        Command::RegimeSweep { common } => regime_sweep(&common),
        Command::TwoDesign { common, n, samples } => two_design(&common, n, samples),
        Command::GibbsDemo {
            common,
            beta,
            n,
            terms,
        } => gibbs(&common, beta, n, terms),
        Command::Verify { common } => verify(&common),
    }
}

const DEFAULT_SEED: u64 = 7;

fn read_config(common: &CommonOpts) -> Result<String> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::arg("this subcommand needs --config <path>"))?;
    std::fs::read_to_string(path)
        .map_err(|e| Error::arg(format!("reading {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what} JSON: {e}")))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialising: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to --out when given, otherwise prints to stdout; the bytes
/// are identical either way.
fn emit(common: &CommonOpts, text: &str) -> Result<ExitCode> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| Error::arg(format!("writing {}: {e}", path.display())))?;
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Report subcommands have no row shape, so CSV is refused rather than
/// silently reinterpreted.
fn json_only(common: &CommonOpts, what: &str) -> Result<()> {
    if common.format == Some(Format::Csv) {
        return Err(Error::arg(format!("{what} emits a JSON report, not CSV")));
    }
    Ok(())
}

fn factor_width(f: &FactorSpec) -> Result<usize> {
    match f {
        FactorSpec::Basis(label) => Ok(label.len()),
        FactorSpec::Amplitudes(amps) => qubits_for_dim(amps.len()),
    }
}

fn a_spec_width(spec: &AStateSpec) -> Result<usize> {
    match spec {
        AStateSpec::Product { upper, .. } => factor_width(upper),
        AStateSpec::Circuit { circuit, .. } => Ok(circuit.n / 2),
        AStateSpec::Trotter { hamiltonian, .. } => Ok(hamiltonian.n / 2),
    }
}

fn b_spec_width(spec: &BStateSpec) -> Result<usize> {
    match spec {
        BStateSpec::Bell { labels } => Ok(labels.len()),
        BStateSpec::Decomposition { terms } => Ok(terms
            .first()
            .ok_or_else(|| Error::arg("decomposition needs at least one term"))?
            .pauli
            .len()),
    }
}

#[derive(Serialize)]
struct DmseReport {
    n: usize,
    rank: usize,
    gamma: f64,
    protocol: ProtocolEstimate,
}

#[derive(Serialize)]
struct UbseReport {
    n: usize,
    k: usize,
    lambda: f64,
    protocol: ProtocolEstimate,
}

fn encode_a(common: &CommonOpts, shots: Option<u64>) -> Result<ExitCode> {
    json_only(common, "encode-a")?;
    let spec: AStateSpec = parse_json(&read_config(common)?, "A-state spec")?;
    let n = a_spec_width(&spec)?;
    let (enc, _) = build_a_states(&spec, n)?;
    let mut rng = substream(common.seed.unwrap_or(DEFAULT_SEED), &[0xE0]);
    let protocol = estimate_gamma_protocol(&enc, shots, &mut rng)?;
    let report = DmseReport {
        n,
        rank: enc.rho().rank(),
        gamma: enc.gamma(),
        protocol,
    };
    emit(common, &json_text(&report)?)
}

fn encode_b(common: &CommonOpts, shots: Option<u64>) -> Result<ExitCode> {
    json_only(common, "encode-b")?;
    let spec: BStateSpec = parse_json(&read_config(common)?, "B-state spec")?;
    let n = b_spec_width(&spec)?;
    let enc = build_b_states(&spec, n)?;
    let mut rng = substream(common.seed.unwrap_or(DEFAULT_SEED), &[0xE1]);
    let protocol = estimate_lambda_protocol(&enc, shots, &mut rng)?;
    let report = UbseReport {
        n,
        k: enc.k(),
        lambda: enc.lambda(),
        protocol,
    };
    emit(common, &json_text(&report)?)
}

fn estimate(
    common: &CommonOpts,
    epsilon: Option<f64>,
    delta: Option<f64>,
    method: Option<&str>,
) -> Result<ExitCode> {
    let mut scenario: BenchScenario = parse_json(&read_config(common)?, "scenario")?;
    if let Some(e) = epsilon {
        scenario.epsilon = e;
    }
    if let Some(d) = delta {
        scenario.delta = d;
    }
    if let Some(s) = common.seed {
        scenario.seeds = vec![s];
    }
    if let Some(m) = method {
        scenario.methods = vec![Method::parse(m)?];
    }
    let rows = scenario.run()?;
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => io::rows_to_csv(&rows),
        Format::Json => json_text(&rows)?,
    };
    emit(common, &text)
}

fn bench_extreme(
    common: &CommonOpts,
    n: usize,
    epsilon: f64,
    delta: f64,
    seed_count: u64,
) -> Result<ExitCode> {
    let start = common.seed.unwrap_or(0);
    let seeds: Vec<u64> = (start..start.saturating_add(seed_count)).collect();
    let report = run_extreme_case(n, epsilon, delta, &seeds)?;
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let rows: Vec<_> = report
                .targets
                .iter()
                .flat_map(|t| t.rows.iter().cloned())
                .collect();
            io::rows_to_csv(&rows)
        }
    };
    emit(common, &text)
}

fn default_grid() -> RegimeGrid {
    RegimeGrid {
        n: 4,
        circuit_cuts: vec![0, 1, 2, 3, 4, 6],
        trotter_points: vec![
            TrotterPoint { xt: 0.1, r: 10 },
            TrotterPoint { xt: 0.5, r: 50 },
            TrotterPoint { xt: 0.5, r: 200 },
            TrotterPoint { xt: 1.0, r: 100 },
        ],
        b_one_norms: vec![1.0, 1.5, 2.0],
    }
}

fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "n,kind,parameter,subdivisions,eta,b_one_norm,gamma_lambda,sampling_gain,estimation_gain\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.kind,
            io::format_float(r.parameter),
            r.subdivisions,
            io::format_float(r.eta),
            io::format_float(r.b_one_norm),
            io::format_float(r.gamma_lambda),
            io::format_float(r.sampling_gain),
            io::format_float(r.estimation_gain),
        ));
    }
    out
}

fn regime_sweep(common: &CommonOpts) -> Result<ExitCode> {
    let grid = match &common.config {
        Some(_) => parse_json(&read_config(common)?, "sweep grid")?,
        None => default_grid(),
    };
    let rows = run_regime_sweep(&grid)?;
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_to_csv(&rows),
        Format::Json => json_text(&rows)?,
    };
    emit(common, &text)
}

fn two_design(common: &CommonOpts, n: usize, samples: u64) -> Result<ExitCode> {
    json_only(common, "two-design")?;
    let report = two_design_check(n, samples, common.seed.unwrap_or(DEFAULT_SEED))?;
    emit(common, &json_text(&report)?)
}

fn gibbs(common: &CommonOpts, beta: f64, n: usize, terms: Option<usize>) -> Result<ExitCode> {
    json_only(common, "gibbs-demo")?;
    let h = match &common.config {
        Some(_) => PauliHamiltonian::from_json(&read_config(common)?)?,
        None => {
            let mut rng = substream(common.seed.unwrap_or(DEFAULT_SEED), &[0xE2]);
            random_two_local_hamiltonian(n, terms.unwrap_or(2 * n), &mut rng)?
        }
    };
    let report = gibbs_demo(&h, beta)?;
    emit(common, &json_text(&report)?)
}

fn verify(common: &CommonOpts) -> Result<ExitCode> {
    let results = run_invariant_suite(common.seed.unwrap_or(DEFAULT_SEED));
    let text = match common.format {
        Some(Format::Json) => json_text(&results)?,
        Some(Format::Csv) => return Err(Error::arg("verify emits text or JSON, not CSV")),
        None => {
            let mut t = String::new();
            for r in &results {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                t.push_str(&format!("{tag} {} {}\n", r.name, r.detail));
            }
            t
        }
    };
    emit(common, &text)?;
    if results.iter().all(|r| r.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
