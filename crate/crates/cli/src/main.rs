//! `spd-fw`: generate SPD ensembles, compute Karcher means, run solver
//! comparisons and audit the linear oracles.
//!
//! Exit status is 0 on success, 1 when a solver fails (or an oracle audit
//! finds a violation) and 2 when the configuration or input is invalid.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use spd_fw::bench::{gen_ensemble, report_render, run_benchmark, BenchConfig, WeightScheme};
use spd_fw::frank_wolfe::{CallCounts, StopReason};
use spd_fw::karcher::{solve_mean, Init, Method, SolverConfig, WeightedEnsemble};
use spd_fw::manifold::SpdMatrix;
use spd_fw::oracle::{oracle_check, OracleKind, DEFAULT_BUDGET};
use spd_fw::Error;

#[derive(Parser)]
#[command(
    name = "spd-fw",
    version,
    about = "Frank-Wolfe solvers for Karcher means of SPD matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random weighted ensemble and write it as JSON.
    Gen(GenArgs),
    /// Compute the Karcher mean of an ensemble file.
    Mean(MeanArgs),
    /// Compare all solvers on a generated ensemble.
    Bench(BenchArgs),
    /// Audit the closed-form oracles against a brute-force search.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 40)]
    dim: usize,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Eigenvalues are drawn log-uniformly from [1, cond].
    #[arg(long, default_value_t = 10.0)]
    cond: f64,
    /// `uniform` or `random-simplex`.
    #[arg(long, default_value = "uniform")]
    weights: WeightScheme,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeanArgs {
    /// Ensemble JSON as written by `gen`.
    ensemble: PathBuf,
    #[arg(long, default_value = "rfw")]
    method: Method,
    /// Starting point: `H` (harmonic), `A` (arithmetic) or `mid`.
    #[arg(long, default_value = "H")]
    init: Init,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Gap (FW) or gradient-norm (baselines) tolerance.
    #[arg(long)]
    gap_tol: Option<f64>,
    /// Directory for `mean.json`, `trace.csv` and `trace.json`; the mean is
    /// printed to stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON benchmark configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Comma-separated subset of rfw, efw, rsd, richardson.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<Method>>,
    #[arg(long)]
    init: Option<Init>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gap_tol: Option<f64>,
    #[arg(long)]
    cond: Option<f64>,
    #[arg(long)]
    weights: Option<WeightScheme>,
    /// Record wall-clock timings (traces are then no longer reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Comma-separated dimensions, at most 4.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    dim: Vec<usize>,
    /// Random instances per dimension.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per brute-force search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Write the summary as JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// How a command ended when it did not fail outright.
enum Outcome {
    Success,
    Failure,
}

#[derive(Serialize)]
struct MeanOutput<'a> {
    method: Method,
    init: Init,
    mean: &'a SpdMatrix,
    final_cost: f64,
    iterations: usize,
    final_gap: f64,
    stop: StopReason,
    calls: CallCounts,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Solver(_)
        | Error::NonFinite { .. }
        | Error::InconsistentGap { .. }
        | Error::InfeasibleOracle { .. }
        | Error::InfeasibleStart { .. } => 1,
        _ => 2,
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> spd_fw::Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn gen(args: GenArgs) -> spd_fw::Result<Outcome> {
    let ens = gen_ensemble(args.dim, args.count, args.seed, args.cond, args.weights)?;
    write_or_print(args.out.as_deref(), &ens.to_json_string()?)?;
    Ok(Outcome::Success)
}

fn load_ensemble(path: &Path) -> spd_fw::Result<WeightedEnsemble> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    WeightedEnsemble::from_json_str(&text)
}

fn mean(args: MeanArgs) -> spd_fw::Result<Outcome> {
    let ens = load_ensemble(&args.ensemble)?;
    let config = SolverConfig {
        init: args.init,
        max_iter: args.max_iter,
        gap_tol: args.gap_tol,
        grad_tol: args.gap_tol,
        ..SolverConfig::default()
    };
    config.validate()?;
    let result = solve_mean(&ens, args.method, &config)?;
    let output = MeanOutput {
        method: args.method,
        init: args.init,
        mean: &result.mean,
        final_cost: result.trace.final_cost(),
        iterations: result.trace.iterations(),
        final_gap: result.trace.final_record().fw_gap,
        stop: result.trace.stop,
        calls: result.trace.calls,
    };
    let json = serde_json::to_string_pretty(&output)?;
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("mean.json"), json)?;
            result.trace.save(dir, "trace")?;
            eprintln!(
                "{}: cost {:.12e} after {} iterations ({})",
                args.method,
                output.final_cost,
                output.iterations,
                output.stop.as_str()
            );
        }
        None => println!("{json}"),
    }
    Ok(Outcome::Success)
}

fn bench(args: BenchArgs) -> spd_fw::Result<Outcome> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
        }
        None => BenchConfig::default(),
    };
    if let Some(v) = args.dim {
        config.dim = v;
    }
    if let Some(v) = args.count {
        config.count = v;
    }
    if let Some(v) = args.max_iter {
        config.max_iter = v;
    }
    if let Some(v) = args.method {
        config.methods = v;
    }
    if let Some(v) = args.init {
        config.init = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if args.gap_tol.is_some() {
        config.gap_tol = args.gap_tol;
    }
    if let Some(v) = args.cond {
        config.condition_number = v;
    }
    if let Some(v) = args.weights {
        config.weights = v;
    }
    if args.timings {
        config.record_timings = true;
    }
    if args.out.is_some() {
        config.output_dir = args.out;
    }

    let run = run_benchmark(&config)?;
    print!("{}", report_render(&run.report)?.table);
    println!(
        "reference cost {:.16e} ({} iterations)",
        run.report.reference_cost, run.report.reference_iterations
    );
    let failed: Vec<_> = run.report.methods.iter().filter(|s| s.error.is_some()).collect();
    for s in &failed {
        eprintln!("{} failed: {}", s.method, s.error.as_deref().unwrap_or_default());
    }
    Ok(if failed.is_empty() {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn check(args: OracleCheckArgs) -> spd_fw::Result<Outcome> {
    let summary = oracle_check(&args.dim, args.count, args.seed, args.budget)?;
    println!("oracle      dim  trials  beaten  infeasible  worst_excess  result");
    for row in &summary.rows {
        let name = match row.oracle {
            OracleKind::Euclidean => "euclidean",
            OracleKind::Riemannian => "riemannian",
        };
        println!(
            "{name:<10} {:>4} {:>7} {:>7} {:>11} {:>13.3e}  {}",
            row.dim,
            row.trials,
            row.optimality_failures,
            row.feasibility_failures,
            row.worst_excess,
            if row.passed() { "PASS" } else { "FAIL" }
        );
    }
    if let Some(path) = &args.out {
        write_or_print(Some(path), &serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(if summary.passed() {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Mean(a) => mean(a),
        Command::Bench(a) => bench(a),
        Command::OracleCheck(a) => check(a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_errors_exit_with_one() {
        assert_eq!(exit_code(&Error::Solver("stalled".into())), 1);
        assert_eq!(exit_code(&Error::InconsistentGap { gap: -1.0 }), 1);
        assert_eq!(
            exit_code(&Error::NonFinite {
                what: "cost",
                iteration: 3
            }),
            1
        );
    }

    #[test]
    fn config_errors_exit_with_two() {
        assert_eq!(exit_code(&Error::InvalidConfig("bad".into())), 2);
        assert_eq!(exit_code(&Error::InvalidEnsemble("empty".into())), 2);
        assert_eq!(
            exit_code(&Error::OutOfRange {
                name: "gap_tol",
                value: -1.0,
                range: "[0, inf)"
            }),
            2
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
