//! Frank-Wolfe solvers over operator intervals.
//!
//! [`efw_solve`] moves along straight segments and calls the Euclidean
//! oracle; [`rfw_solve`] moves along geodesics and calls the Riemannian
//! oracle. Both stop on the Frank-Wolfe gap, which certifies optimality for
//! (geodesically) convex objectives, or after `max_iter` updates.

mod curvature;
mod problem;
mod solver;
mod step;
mod trace;

pub use curvature::{
    estimate_curvature, interior_radius, lipschitz_curvature_bound, CurvatureEstimate, CurvatureMethod,
    MIN_CURVATURE_SAMPLES,
};
pub use problem::{finite_difference_gradient, CallCounts, FnObjective, Objective, ObjectiveProblem};
pub use solver::{efw_solve, fw_gap, rfw_solve, FwOptions, Geometry, DEFAULT_GAP_TOL, GAP_CONSISTENCY_TOL};
pub use step::StepRule;
pub use trace::{ConvergenceTrace, StopReason, TraceRecord};
