//! Benchmark harness: random ensembles, method comparisons against a
//! high-accuracy reference, and report rendering.

mod generate;
mod report;
mod run;

pub use generate::{gen_ensemble, WeightScheme};
pub use report::{parse_report_csv, report_render, RenderedReport, REPORT_COLUMNS};
pub use run::{
    reference_solution, relative_gap, run_benchmark, BenchConfig, BenchReport, BenchRun, MethodSummary,
    REFERENCE_GRAD_TOL, REFERENCE_MAX_ITER,
};
