//! The weighted Karcher mean `argmin_X Σ w_i δ_R²(X, A_i)`.
//!
//! The mean lies between the harmonic and arithmetic means, so Frank-Wolfe
//! can run over the interval `[H, A]`. Two gradient-type baselines,
//! steepest descent and a Richardson iteration, work without constraints.

mod ensemble;
mod objective;
mod solve;

pub use ensemble::{EnsembleFile, WeightedEnsemble, WEIGHT_SUM_TOL};
pub use objective::{
    arithmetic_mean, feasible_interval, harmonic_mean, karcher_cost, karcher_eucl_grad, karcher_riem_grad,
    KarcherObjective,
};
pub use solve::{
    richardson_step, rsd_solve, solve_mean, Init, MeanResult, Method, SolverConfig, ARMIJO_C, ARMIJO_MAX_HALVINGS,
    ARMIJO_SHRINK, DEFAULT_RICHARDSON_ALPHA, RICHARDSON_MAX_HALVINGS,
};
