use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{gen_ensemble, WeightScheme};
use super::report::report_render;
use crate::error::{Error, Result};
use crate::frank_wolfe::{ConvergenceTrace, StepRule, StopReason};
use crate::karcher::{solve_mean, Init, MeanResult, Method, SolverConfig, WeightedEnsemble};

/// Gradient-norm target of the reference steepest-descent run.
pub const REFERENCE_GRAD_TOL: f64 = 1e-12;
pub const REFERENCE_MAX_ITER: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    /// Matrix size `N`.
    pub dim: usize,
    /// Number of matrices `M`.
    pub count: usize,
    /// Iteration budget `K` for every method.
    pub max_iter: usize,
    pub methods: Vec<Method>,
    pub init: Init,
    pub seed: u64,
    pub condition_number: f64,
    pub weights: WeightScheme,
    /// Where traces and the summary are written; nothing is written if unset.
    /// Left out of serialized summaries so that runs into different
    /// directories produce identical files.
    #[serde(skip_serializing)]
    pub output_dir: Option<PathBuf>,
    pub step_rule: StepRule,
    /// Stopping tolerance for all methods; `None` uses `1e-8·(1 + cost)`.
    pub gap_tol: Option<f64>,
    pub record_timings: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dim: 40,
            count: 10,
            max_iter: 30,
            methods: Method::ALL.to_vec(),
            init: Init::Harmonic,
            seed: 0,
            condition_number: 10.0,
            weights: WeightScheme::Uniform,
            output_dir: None,
            step_rule: StepRule::Classic,
            gap_tol: None,
            record_timings: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.count == 0 || self.max_iter == 0 {
            return Err(Error::InvalidConfig(format!(
                "dim, count and max_iter must be at least 1 (got {}, {}, {})",
                self.dim, self.count, self.max_iter
            )));
        }
        if !(self.condition_number >= 1.0) || !self.condition_number.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "condition number must be at least 1, got {}",
                self.condition_number
            )));
        }
        self.solver_config().validate()
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            init: self.init,
            max_iter: self.max_iter,
            gap_tol: self.gap_tol,
            grad_tol: self.gap_tol,
            step_rule: self.step_rule,
            record_timings: self.record_timings,
            ..SolverConfig::default()
        }
    }

    pub fn ensemble(&self) -> Result<WeightedEnsemble> {
        gen_ensemble(self.dim, self.count, self.seed, self.condition_number, self.weights)
    }
}

/// One method's outcome. Failed runs carry `error` and NaN numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub final_cost: f64,
    /// `(cost − reference)/reference`, or the plain difference when the
    /// reference cost is zero.
    pub relative_gap: f64,
    pub iterations: usize,
    pub grad_calls: usize,
    /// Cost evaluations the solver itself needed.
    pub cost_calls: usize,
    /// Cost evaluations made only to fill the trace.
    pub report_cost_calls: usize,
    pub oracle_calls: usize,
    pub wall_time_s: f64,
    pub stop: Option<StopReason>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub reference_cost: f64,
    pub reference_iterations: usize,
    pub methods: Vec<MethodSummary>,
}

/// Result of a benchmark with the traces kept in memory.
#[derive(Clone, Debug)]
pub struct BenchRun {
    pub report: BenchReport,
    pub ensemble: WeightedEnsemble,
    pub reference: MeanResult,
    /// One entry per configured method, in order.
    pub results: Vec<Result<MeanResult, String>>,
}

pub fn relative_gap(cost: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        cost - reference
    } else {
        (cost - reference) / reference.abs()
    }
}

/// Steepest descent from `H` to a Riemannian gradient norm of `1e-12`.
pub fn reference_solution(ens: &WeightedEnsemble) -> Result<MeanResult> {
    let config = SolverConfig {
        max_iter: REFERENCE_MAX_ITER,
        grad_tol: Some(REFERENCE_GRAD_TOL),
        ..SolverConfig::default()
    };
    let mut r = solve_mean(ens, Method::Rsd, &config)?;
    r.reference_cost = Some(r.trace.final_cost());
    Ok(r)
}

fn summarize(method: Method, outcome: &Result<MeanResult, String>, reference: f64, wall: f64) -> MethodSummary {
    match outcome {
        Ok(r) => {
            let cost = r.trace.final_cost();
            MethodSummary {
                method,
                final_cost: cost,
                relative_gap: relative_gap(cost, reference),
                iterations: r.trace.iterations(),
                grad_calls: r.trace.calls.grad,
                cost_calls: r.trace.calls.cost,
                report_cost_calls: r.trace.calls.report_cost,
                oracle_calls: r.trace.calls.oracle,
                wall_time_s: wall,
                stop: Some(r.trace.stop),
                error: None,
            }
        }
        Err(e) => MethodSummary {
            method,
            final_cost: f64::NAN,
            relative_gap: f64::NAN,
            iterations: 0,
            grad_calls: 0,
            cost_calls: 0,
            report_cost_calls: 0,
            oracle_calls: 0,
            wall_time_s: wall,
            stop: None,
            error: Some(e.clone()),
        },
    }
}

/// Runs every configured method on a generated ensemble and compares the
/// final costs with a high-accuracy reference.
///
/// A failing method is recorded in its summary and does not stop the others.
/// With an output directory, writes `ensemble.json`, `reference.{csv,json}`,
/// `<method>.{csv,json}` traces, `summary.json`, `report.csv` and `report.txt`.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchRun> {
    config.validate()?;
    let ensemble = config.ensemble()?;
    let reference = reference_solution(&ensemble)?;
    let reference_cost = reference.trace.final_cost();
    let solver = config.solver_config();

    let outcomes: Vec<(Result<MeanResult, String>, f64)> = config
        .methods
        .par_iter()
        .map(|&method| {
            let started = Instant::now();
            let r = solve_mean(&ensemble, method, &solver)
                .map(|mut r| {
                    r.reference_cost = Some(reference_cost);
                    r
                })
                .map_err(|e| e.to_string());
            let wall = if config.record_timings {
                started.elapsed().as_secs_f64()
            } else {
                0.0
            };
            (r, wall)
        })
        .collect();

    let methods = config
        .methods
        .iter()
        .zip(&outcomes)
        .map(|(&m, (r, wall))| summarize(m, r, reference_cost, *wall))
        .collect();
    let report = BenchReport {
        config: config.clone(),
        reference_cost,
        reference_iterations: reference.trace.iterations(),
        methods,
    };
    let results: Vec<Result<MeanResult, String>> = outcomes.into_iter().map(|(r, _)| r).collect();

    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
        ensemble.save(&dir.join("ensemble.json"))?;
        reference.trace.save(dir, "reference")?;
        for (method, r) in config.methods.iter().zip(&results) {
            if let Ok(r) = r {
                r.trace.save(dir, method.as_str())?;
            }
        }
        std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&report)?)?;
        let rendered = report_render(&report)?;
        std::fs::write(dir.join("report.csv"), &rendered.csv)?;
        std::fs::write(dir.join("report.txt"), &rendered.table)?;
    }

    Ok(BenchRun {
        report,
        ensemble,
        reference,
        results,
    })
}

impl BenchRun {
    /// The trace of `method`, if it ran and succeeded.
    pub fn trace(&self, method: Method) -> Option<&ConvergenceTrace> {
        self.report
            .config
            .methods
            .iter()
            .position(|&m| m == method)
            .and_then(|i| self.results[i].as_ref().ok())
            .map(|r| &r.trace)
    }
}
