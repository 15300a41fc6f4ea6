use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::problem::ObjectiveProblem;
use super::step::StepRule;
use super::trace::{ConvergenceTrace, StopReason, TraceRecord};
use crate::error::{Error, Result};
use crate::manifold::{geodesic, matrix_fn, MatrixFn, SpdMatrix, SymMatrix};
use crate::oracle::{euclid_oracle, feasibility_check, riem_oracle};

/// Gaps below `-GAP_CONSISTENCY_TOL·(1 + |φ(X)|)` are reported as errors.
pub const GAP_CONSISTENCY_TOL: f64 = 1e-8;

/// Relative factor of the default stopping tolerance `1e-8·(1 + |φ(X_k)|)`.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Euclidean,
    Riemannian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FwOptions {
    pub rule: StepRule,
    pub max_iter: usize,
    /// Absolute gap tolerance; `None` uses `1e-8·(1 + |φ(X_k)|)`.
    pub gap_tol: Option<f64>,
    pub record_timings: bool,
}

impl Default for FwOptions {
    fn default() -> Self {
        Self {
            rule: StepRule::Classic,
            max_iter: 200,
            gap_tol: None,
            record_timings: false,
        }
    }
}

impl FwOptions {
    pub fn validate(&self) -> Result<()> {
        self.rule.validate()?;
        if let Some(tol) = self.gap_tol {
            if !(tol >= 0.0) {
                return Err(Error::OutOfRange {
                    name: "gap_tol",
                    value: tol,
                    range: "[0, inf)",
                });
            }
        }
        Ok(())
    }
}

/// Linear-oracle step: the vertex `Z` and the FW gap at `X`.
pub(crate) struct Direction {
    pub z: SpdMatrix,
    pub gap: f64,
}

/// Euclidean direction: maximize `tr(−∇φ(X)·(Z − X))`.
fn euclid_direction(problem: &ObjectiveProblem, x: &SpdMatrix, grad: &SymMatrix) -> Result<Direction> {
    problem.count_oracle();
    let s = grad.scale(-1.0);
    let sol = euclid_oracle(&s, problem.interval())?;
    let gap = sol.objective_value - s.as_matrix().dot(x.as_matrix());
    Ok(Direction { z: sol.z, gap })
}

/// Riemannian direction: minimize `⟨X^{1/2} ∇φ X^{1/2}, log(X^{-1/2} Z X^{-1/2})⟩`
/// by handing `−X^{1/2} ∇φ X^{1/2}` and `X^{-1/2}` to the closed-form oracle.
/// The gap is the negated pairing at the returned point.
fn riem_direction(problem: &ObjectiveProblem, x: &SpdMatrix, grad: &SymMatrix) -> Result<Direction> {
    problem.count_oracle();
    let sqrt = matrix_fn(x, MatrixFn::Sqrt)?;
    let inv_sqrt = SpdMatrix::trusted(matrix_fn(x, MatrixFn::InvSqrt)?.into_inner());
    let colored = sqrt.as_matrix() * grad.as_matrix() * sqrt.as_matrix();
    let s = SymMatrix((&colored + colored.transpose()) * -0.5);
    let sol = riem_oracle(&s, &inv_sqrt, problem.interval())?;
    Ok(Direction {
        z: sol.z,
        gap: sol.objective_value,
    })
}

fn direction(problem: &ObjectiveProblem, x: &SpdMatrix, grad: &SymMatrix, geometry: Geometry) -> Result<Direction> {
    let dir = match geometry {
        Geometry::Euclidean => euclid_direction(problem, x, grad)?,
        Geometry::Riemannian => riem_direction(problem, x, grad)?,
    };
    let report = feasibility_check(&dir.z, problem.interval())?;
    if !report.feasible {
        return Err(Error::InfeasibleOracle {
            lower_margin: report.lower_margin,
            upper_margin: report.upper_margin,
        });
    }
    Ok(dir)
}

fn check_gap(gap: f64, cost: f64) -> Result<f64> {
    if gap < -GAP_CONSISTENCY_TOL * (1.0 + cost.abs()) {
        return Err(Error::InconsistentGap { gap });
    }
    Ok(gap.max(0.0))
}

/// The Frank-Wolfe gap of `problem` at `x`.
///
/// Euclidean: `max_Z tr((Z − X)·(−∇^H φ(X)))`. Riemannian: the negated
/// directional pairing at the closed-form oracle's point. Small negative
/// values from rounding are clipped to zero.
pub fn fw_gap(problem: &ObjectiveProblem, x: &SpdMatrix, geometry: Geometry) -> Result<f64> {
    let grad = problem.grad(x);
    let dir = direction(problem, x, &grad, geometry)?;
    check_gap(dir.gap, problem.objective().cost(x))
}

/// Euclidean Frank-Wolfe: `X_{k+1} = (1 − s_k) X_k + s_k Z_k`.
pub fn efw_solve(problem: &ObjectiveProblem, x0: &SpdMatrix, options: &FwOptions) -> Result<ConvergenceTrace> {
    fw_loop(problem, x0, options, Geometry::Euclidean)
}

/// Riemannian Frank-Wolfe: `X_{k+1} = X_k #_{s_k} Z_k`.
pub fn rfw_solve(problem: &ObjectiveProblem, x0: &SpdMatrix, options: &FwOptions) -> Result<ConvergenceTrace> {
    fw_loop(problem, x0, options, Geometry::Riemannian)
}

fn fw_loop(
    problem: &ObjectiveProblem,
    x0: &SpdMatrix,
    options: &FwOptions,
    geometry: Geometry,
) -> Result<ConvergenceTrace> {
    options.validate()?;
    let report = feasibility_check(x0, problem.interval())?;
    if !report.feasible {
        return Err(Error::InfeasibleStart {
            lower_margin: report.lower_margin,
            upper_margin: report.upper_margin,
        });
    }
    problem.reset_calls();

    let timed = options.record_timings;
    let mut x = x0.clone();
    let mut records = Vec::with_capacity(options.max_iter + 1);
    let mut h0 = 0.0;
    let mut k = 0;
    let stop = loop {
        let started = Instant::now();
        let cost = if options.rule.needs_cost() {
            problem.cost(&x)
        } else {
            problem.report_cost(&x)
        };
        if !cost.is_finite() {
            return Err(Error::NonFinite {
                what: "cost",
                iteration: k,
            });
        }
        let grad = problem.grad(&x);
        if !grad.is_finite() {
            return Err(Error::NonFinite {
                what: "gradient",
                iteration: k,
            });
        }

        let oracle_started = Instant::now();
        let dir = direction(problem, &x, &grad, geometry)?;
        let oracle_time = if timed {
            oracle_started.elapsed().as_secs_f64()
        } else {
            0.0
        };
        let gap = check_gap(dir.gap, cost)?;
        if k == 0 {
            h0 = gap;
        }

        let tol = options.gap_tol.unwrap_or(DEFAULT_GAP_TOL * (1.0 + cost.abs()));
        let (step, stop) = if gap <= tol {
            (0.0, Some(StopReason::Tolerance))
        } else if k >= options.max_iter {
            (0.0, Some(StopReason::MaxIter))
        } else {
            let s = options.rule.step_size(k, cost, gap);
            if s > 0.0 {
                (s, None)
            } else {
                (0.0, Some(StopReason::StepVanished))
            }
        };

        if step > 0.0 {
            x = match geometry {
                Geometry::Euclidean => SpdMatrix::trusted(x.as_matrix() * (1.0 - step) + dir.z.as_matrix() * step),
                Geometry::Riemannian => geodesic(&x, &dir.z, step)?,
            };
        }
        records.push(TraceRecord {
            k,
            cost,
            fw_gap: gap,
            step_size: step,
            oracle_time_s: oracle_time,
            iter_time_s: if timed { started.elapsed().as_secs_f64() } else { 0.0 },
        });
        if let Some(stop) = stop {
            break stop;
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
