use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ensemble::WeightedEnsemble;
use super::objective::{arithmetic_mean, harmonic_mean, karcher_riem_grad, KarcherObjective};
use crate::error::{Error, Result};
use crate::frank_wolfe::{
    efw_solve, rfw_solve, ConvergenceTrace, FwOptions, ObjectiveProblem, StepRule, StopReason, TraceRecord,
    DEFAULT_GAP_TOL,
};
use crate::manifold::{exp_map, riem_grad, tangent_norm, SpdMatrix, SymMatrix};

/// Sufficient-decrease constant of the steepest-descent line search.
pub const ARMIJO_C: f64 = 1e-4;
pub const ARMIJO_SHRINK: f64 = 0.5;
pub const ARMIJO_MAX_HALVINGS: usize = 40;
pub const RICHARDSON_MAX_HALVINGS: usize = 30;
pub const DEFAULT_RICHARDSON_ALPHA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Riemannian Frank-Wolfe.
    Rfw,
    /// Euclidean Frank-Wolfe.
    Efw,
    /// Riemannian steepest descent with Armijo backtracking.
    Rsd,
    /// `X ← X − α X Σ w_i log(A_i⁻¹ X)`.
    Richardson,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Rfw, Method::Efw, Method::Rsd, Method::Richardson];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Rfw => "rfw",
            Method::Efw => "efw",
            Method::Rsd => "rsd",
            Method::Richardson => "richardson",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rfw" => Ok(Method::Rfw),
            "efw" => Ok(Method::Efw),
            "rsd" | "sd" => Ok(Method::Rsd),
            "richardson" => Ok(Method::Richardson),
            other => Err(Error::InvalidConfig(format!(
                "unknown method `{other}` (expected rfw, efw, rsd or richardson)"
            ))),
        }
    }
}

/// Starting point of the iterative solvers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    /// The harmonic mean `H`.
    #[default]
    Harmonic,
    /// The arithmetic mean `A`.
    Arithmetic,
    /// `(H + A)/2`.
    Midpoint,
}

impl Init {
    pub fn point(&self, ens: &WeightedEnsemble) -> SpdMatrix {
        match self {
            Init::Harmonic => harmonic_mean(ens),
            Init::Arithmetic => arithmetic_mean(ens),
            Init::Midpoint => {
                SpdMatrix::trusted((harmonic_mean(ens).into_inner() + arithmetic_mean(ens).into_inner()) * 0.5)
            }
        }
    }
}

impl FromStr for Init {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" | "harmonic" => Ok(Init::Harmonic),
            "A" | "a" | "arithmetic" => Ok(Init::Arithmetic),
            "mid" | "midpoint" => Ok(Init::Midpoint),
            other => Err(Error::InvalidConfig(format!(
                "unknown init `{other}` (expected H, A or mid)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub init: Init,
    pub max_iter: usize,
    /// Frank-Wolfe gap tolerance; `None` uses `1e-8·(1 + cost)`.
    pub gap_tol: Option<f64>,
    /// Riemannian gradient-norm tolerance of the baselines; `None` uses
    /// `1e-8·(1 + cost)`.
    pub grad_tol: Option<f64>,
    pub step_rule: StepRule,
    pub richardson_alpha: f64,
    pub record_timings: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            init: Init::Harmonic,
            max_iter: 200,
            gap_tol: None,
            grad_tol: None,
            step_rule: StepRule::Classic,
            richardson_alpha: DEFAULT_RICHARDSON_ALPHA,
            record_timings: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.step_rule.validate()?;
        for (name, tol) in [("gap_tol", self.gap_tol), ("grad_tol", self.grad_tol)] {
            if let Some(t) = tol {
                if !(t >= 0.0) {
                    return Err(Error::OutOfRange {
                        name,
                        value: t,
                        range: "[0, inf)",
                    });
                }
            }
        }
        if !(self.richardson_alpha > 0.0 && self.richardson_alpha.is_finite()) {
            return Err(Error::OutOfRange {
                name: "richardson_alpha",
                value: self.richardson_alpha,
                range: "(0, inf)",
            });
        }
        Ok(())
    }

    fn fw_options(&self) -> FwOptions {
        FwOptions {
            rule: self.step_rule,
            max_iter: self.max_iter,
            gap_tol: self.gap_tol,
            record_timings: self.record_timings,
        }
    }

    fn grad_tolerance(&self, cost: f64) -> f64 {
        self.grad_tol.unwrap_or(DEFAULT_GAP_TOL * (1.0 + cost.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanResult {
    pub mean: SpdMatrix,
    pub trace: ConvergenceTrace,
    pub method: Method,
    pub reference_cost: Option<f64>,
}

/// Computes the weighted Karcher mean of `ens` with `method`.
pub fn solve_mean(ens: &WeightedEnsemble, method: Method, config: &SolverConfig) -> Result<MeanResult> {
    config.validate()?;
    let ensemble = Arc::new(ens.clone());
    let problem = KarcherObjective::problem(ensemble)?;
    let x0 = config.init.point(ens);
    let trace = match method {
        Method::Rfw => rfw_solve(&problem, &x0, &config.fw_options())?,
        Method::Efw => efw_solve(&problem, &x0, &config.fw_options())?,
        Method::Rsd => rsd_loop(&problem, &x0, config)?,
        Method::Richardson => richardson_loop(&problem, &x0, config)?,
    };
    Ok(MeanResult {
        mean: trace.final_point.clone(),
        trace,
        method,
        reference_cost: None,
    })
}

/// Riemannian steepest descent from `config.init`.
pub fn rsd_solve(ens: &WeightedEnsemble, config: &SolverConfig) -> Result<MeanResult> {
    solve_mean(ens, Method::Rsd, config)
}

/// One Richardson update `X − α X Σ w_i log(A_i⁻¹ X)`, halving `α` until
/// the result is positive definite. Returns the new point and the `α` used.
pub fn richardson_step(x: &SpdMatrix, ens: &WeightedEnsemble, alpha: f64) -> Result<(SpdMatrix, f64)> {
    // X log(A⁻¹X) = X^{1/2} log(X^{1/2} A⁻¹ X^{1/2}) X^{1/2}
    let direction = karcher_riem_grad(x, ens)?;
    richardson_update(x, &direction, alpha)
}

fn richardson_update(x: &SpdMatrix, direction: &SymMatrix, alpha: f64) -> Result<(SpdMatrix, f64)> {
    let mut a = alpha;
    for _ in 0..=RICHARDSON_MAX_HALVINGS {
        if let Ok(next) = SpdMatrix::new(x.as_matrix() - direction.as_matrix() * a) {
            return Ok((next, a));
        }
        a *= 0.5;
    }
    Err(Error::Solver(format!(
        "Richardson step not positive definite after {RICHARDSON_MAX_HALVINGS} halvings of alpha = {alpha}"
    )))
}

/// Half-convention Riemannian gradient `X ∇f X / 2` from the problem's full gradient.
fn half_riem_grad(problem: &ObjectiveProblem, x: &SpdMatrix) -> Result<SymMatrix> {
    let g = problem.grad(x);
    Ok(riem_grad(x, g.as_matrix())?.scale(0.5))
}

fn record(k: usize, cost: f64, grad_norm: f64, step: f64, started: Option<Instant>) -> TraceRecord {
    TraceRecord {
        k,
        cost,
        fw_gap: grad_norm,
        step_size: step,
        oracle_time_s: 0.0,
        iter_time_s: started.map_or(0.0, |t| t.elapsed().as_secs_f64()),
    }
}

fn rsd_loop(problem: &ObjectiveProblem, x0: &SpdMatrix, config: &SolverConfig) -> Result<ConvergenceTrace> {
    problem.reset_calls();
    let mut x = x0.clone();
    let mut cost = problem.cost(&x);
    let mut records = Vec::new();
    let mut h0 = 0.0;
    let mut k = 0;
    let stop = loop {
        let started = config.record_timings.then(Instant::now);
        if !cost.is_finite() {
            return Err(Error::NonFinite {
                what: "cost",
                iteration: k,
            });
        }
        let xi = half_riem_grad(problem, &x)?;
        let norm = tangent_norm(&x, &xi)?;
        if !norm.is_finite() {
            return Err(Error::NonFinite {
                what: "gradient",
                iteration: k,
            });
        }
        if k == 0 {
            h0 = norm;
        }
        if norm <= config.grad_tolerance(cost) {
            records.push(record(k, cost, norm, 0.0, started));
            break StopReason::Tolerance;
        }
        if k >= config.max_iter {
            records.push(record(k, cost, norm, 0.0, started));
            break StopReason::MaxIter;
        }
        // the full gradient is 2ξ, so the slope along −ξ is −2‖ξ‖²
        let slope = 2.0 * norm * norm;
        let descent = xi.scale(-1.0);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..ARMIJO_MAX_HALVINGS {
            let candidate = exp_map(&x, &descent.scale(t))?;
            let c = problem.cost(&candidate);
            if c <= cost - ARMIJO_C * t * slope {
                accepted = Some((candidate, c));
                break;
            }
            t *= ARMIJO_SHRINK;
        }
        match accepted {
            Some((next, c)) => {
                records.push(record(k, cost, norm, t, started));
                x = next;
                cost = c;
            }
            None => {
                records.push(record(k, cost, norm, 0.0, started));
                break StopReason::LineSearchExhausted;
            }
        }
        k += 1;
    };
    Ok(ConvergenceTrace {
        records,
        h0,
        final_point: x,
        calls: problem.calls(),
        stop,
    })
}

fn richardson_loop(problem: &ObjectiveProblem, x0: &SpdMatrix, config: &SolverConfig) -> Result<ConvergenceTrace> {
    problem.reset_calls();
    let mut x = x0.clone();
    let mut records = Vec::new();
    let mut h0 = 0.0;
    let mut k = 0;
    let stop = loop {
        let started = config.record_timings.then(Instant::now);
        let cost = problem.report_cost(&x);
        if !cost.is_finite() {
            return Err(Error::NonFinite {
                what: "cost",
                iteration: k,
            });
        }
        let xi = half_riem_grad(problem, &x)?;
        let norm = tangent_norm(&x, &xi)?;
        if !norm.is_finite() {
            return Err(Error::NonFinite {
                what: "gradient",
                iteration: k,
            });
        }
        if k == 0 {
            h0 = norm;
        }
        if norm <= config.grad_tolerance(cost) {
            records.push(record(k, cost, norm, 0.0, started));
            break StopReason::Tolerance;
        }
        if k >= config.max_iter {
            records.push(record(k, cost, norm, 0.0, started));
            break StopReason::MaxIter;
        }
        let (next, alpha) = richardson_update(&x, &xi, config.richardson_alpha)?;
        records.push(record(k, cost, norm, alpha, started));
        x = next;
        k += 1;
    };
    Ok(ConvergenceTrace {
        records,
        h0,
        final_point: x,
        calls: problem.calls(),
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_ensemble(v: &[f64]) -> WeightedEnsemble {
        WeightedEnsemble::uniform(v.iter().map(|&a| SpdMatrix::from_diagonal(&[a]).unwrap()).collect()).unwrap()
    }

    #[test]
    fn parse_tags() {
        assert_eq!("RFW".parse::<Method>().unwrap(), Method::Rfw);
        assert_eq!("richardson".parse::<Method>().unwrap(), Method::Richardson);
        assert!("newton".parse::<Method>().is_err());
        assert_eq!("H".parse::<Init>().unwrap(), Init::Harmonic);
        assert_eq!("mid".parse::<Init>().unwrap(), Init::Midpoint);
        assert!("G".parse::<Init>().is_err());
    }

    #[test]
    fn scalar_midpoint_init() {
        let ens = scalar_ensemble(&[1.0, 4.0]);
        assert!((Init::Midpoint.point(&ens).as_matrix()[(0, 0)] - 2.05).abs() < 1e-15);
    }

    #[test]
    fn richardson_fixed_point_and_scalar_iteration() {
        let ens = scalar_ensemble(&[1.0, 4.0]);
        let (same, _) = richardson_step(&SpdMatrix::from_diagonal(&[2.0]).unwrap(), &ens, 0.1).unwrap();
        assert!((same.as_matrix()[(0, 0)] - 2.0).abs() < 1e-15);
        // x' = x − α x Σ w_i log(x/a_i) = 1 + 0.1·ln 2 at x = 1
        let (next, alpha) = richardson_step(&SpdMatrix::from_diagonal(&[1.0]).unwrap(), &ens, 0.1).unwrap();
        assert_eq!(alpha, 0.1);
        assert!((next.as_matrix()[(0, 0)] - (1.0 + 0.1 * 2.0_f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn richardson_halves_until_positive() {
        let ens = scalar_ensemble(&[1.0, 4.0]);
        let (x, alpha) = richardson_step(&SpdMatrix::from_diagonal(&[100.0]).unwrap(), &ens, 10.0).unwrap();
        assert!(alpha < 10.0);
        assert!(x.as_matrix()[(0, 0)] > 0.0);
    }

    #[test]
    fn rsd_single_matrix_one_step() {
        let a = SpdMatrix::from_row_slice(2, &[2.0, 0.3, 0.3, 1.0]).unwrap();
        let ens = WeightedEnsemble::uniform(vec![a.clone()]).unwrap();
        let x0 = SpdMatrix::from_row_slice(2, &[5.0, -1.0, -1.0, 3.0]).unwrap();
        let problem = KarcherObjective::problem(Arc::new(ens)).unwrap();
        // the interval is the point {A}, but steepest descent ignores it
        let trace = rsd_loop(&problem, &x0, &SolverConfig::default()).unwrap();
        assert_eq!(trace.iterations(), 1);
        assert_eq!(trace.records[0].step_size, 1.0);
        assert!((trace.final_point.as_matrix() - a.as_matrix()).amax() < 1e-12);
    }

    #[test]
    fn scalar_solvers_reach_geometric_mean() {
        let ens = scalar_ensemble(&[1.0, 4.0]);
        for method in [Method::Efw, Method::Rsd, Method::Richardson] {
            let r = solve_mean(&ens, method, &SolverConfig::default()).unwrap();
            assert!((r.mean.as_matrix()[(0, 0)] - 2.0).abs() < 1e-4, "{method}: {}", r.mean);
            assert!(r.trace.iterations() <= 200);
        }
        // log x_k oscillates around log 2 with amplitude O(1/k) under 2/(k+2)
        let r = solve_mean(&ens, Method::Rfw, &SolverConfig::default()).unwrap();
        assert!((r.mean.as_matrix()[(0, 0)] - 2.0).abs() < 1.0 / 200.0);
        let short = SolverConfig {
            step_rule: StepRule::EfwOptimal { m: 1.0 },
            ..SolverConfig::default()
        };
        let r = solve_mean(&ens, Method::Rfw, &short).unwrap();
        assert!((r.mean.as_matrix()[(0, 0)] - 2.0).abs() < 1e-4, "{}", r.mean);
        assert!(r.trace.iterations() <= 200);
    }

    #[test]
    fn single_matrix_zero_iterations() {
        let a = SpdMatrix::from_row_slice(2, &[2.0, 0.3, 0.3, 1.0]).unwrap();
        let ens = WeightedEnsemble::uniform(vec![a.clone()]).unwrap();
        for method in Method::ALL {
            let r = solve_mean(&ens, method, &SolverConfig::default()).unwrap();
            assert_eq!(r.trace.iterations(), 0, "{method}");
            assert!((r.mean.as_matrix() - a.as_matrix()).amax() < 1e-12);
        }
    }
}
