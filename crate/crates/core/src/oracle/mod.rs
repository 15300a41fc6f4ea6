//! Linear oracles over operator intervals `L ≼ Z ≼ U`.
//!
//! [`euclid_oracle`] maximizes `tr(S Z)`; [`riem_oracle`] is the closed-form
//! candidate for maximizing `tr(S log(X Z X))`, the pulled-back linear
//! functional that Riemannian Frank-Wolfe minimizes. [`brute_force_oracle`]
//! is an independent search used to audit both.

mod brute_force;
mod check;
mod closed_form;
mod interval;

pub use brute_force::{brute_force_oracle, MAX_BRUTE_FORCE_DIM, MIN_BRUTE_FORCE_BUDGET};
pub use check::{
    oracle_check, random_instance, OracleCheckRow, OracleCheckSummary, OracleInstance, OracleKind, DEFAULT_BUDGET,
    OPTIMALITY_SLACK,
};
pub use closed_form::{euclid_oracle, log_trace_objective, riem_oracle, OracleDiagnostics, OracleSolution};
pub use interval::{
    feasibility_check, FeasibilityReport, OperatorInterval, DEGENERATE_TOL, FEASIBILITY_TOL, ORDER_TOL,
};
