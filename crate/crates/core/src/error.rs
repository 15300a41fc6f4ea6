use thiserror::Error;

/// Errors produced by the geometry, oracle, solver and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e}, threshold {threshold:e})")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },

    #[error("{function} undefined for eigenvalue {eigenvalue:e}")]
    Domain { function: &'static str, eigenvalue: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid operator interval: {0}")]
    InvalidInterval(String),

    #[error("starting point is infeasible (lower margin {lower_margin:e}, upper margin {upper_margin:e})")]
    InfeasibleStart { lower_margin: f64, upper_margin: f64 },

    #[error("oracle returned an infeasible point (lower margin {lower_margin:e}, upper margin {upper_margin:e})")]
    InfeasibleOracle { lower_margin: f64, upper_margin: f64 },

    #[error("non-finite {what} at iteration {iteration}")]
    NonFinite { what: &'static str, iteration: usize },

    #[error("negative Frank-Wolfe gap {gap:e}: oracle or gradient is inconsistent")]
    InconsistentGap { gap: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
