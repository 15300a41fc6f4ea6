#![allow(dead_code)]

use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use spd_fw::bench::{gen_ensemble, reference_solution, WeightScheme};
use spd_fw::frank_wolfe::{estimate_curvature, Geometry};
use spd_fw::karcher::{KarcherObjective, MeanResult, WeightedEnsemble};
use spd_fw::manifold::{EigDecomposition, SpdMatrix};

/// Writes a status line past the test harness's output capture so that it
/// shows up in plain `cargo test` logs.
pub fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {criterion:>2} {status} {name}: {detail}\n");
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

pub fn rel_frob(a: &SpdMatrix, b: &SpdMatrix) -> f64 {
    (a.as_matrix() - b.as_matrix()).norm() / b.as_matrix().norm()
}

pub fn min_eig(m: &DMatrix<f64>) -> f64 {
    EigDecomposition::new(m).min()
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Sampled curvature inflated by 1.5.
pub fn curvature_hat(ens: &WeightedEnsemble, geometry: Geometry, seed: u64) -> f64 {
    let problem = KarcherObjective::problem(Arc::new(ens.clone())).unwrap();
    1.5 * estimate_curvature(&problem, geometry, 50, seed).unwrap().m_phi
}

pub struct Instance {
    pub seed: u64,
    pub ensemble: WeightedEnsemble,
    pub reference: MeanResult,
    pub f_star: f64,
}

pub fn instance(dim: usize, count: usize, seed: u64) -> Instance {
    let ensemble = gen_ensemble(dim, count, seed, 10.0, WeightScheme::Uniform).unwrap();
    let reference = reference_solution(&ensemble).unwrap();
    let f_star = reference.trace.final_cost();
    Instance {
        seed,
        ensemble,
        reference,
        f_star,
    }
}

/// The ten `d = 10`, `n = 5` instances used by the rate checks.
pub fn rate_instances() -> Vec<Instance> {
    (0..10).map(|seed| instance(10, 5, 100 + seed)).collect()
}

/// Solves to high accuracy: gradient norm `1e-12` for the baselines, FW gap
/// `1e-12` with the short step `min(1, G/M̂)` for the Frank-Wolfe methods.
pub fn tight(ens: &WeightedEnsemble, method: spd_fw::karcher::Method) -> MeanResult {
    use spd_fw::frank_wolfe::StepRule;
    use spd_fw::karcher::{solve_mean, Method, SolverConfig};
    let mut config = SolverConfig {
        max_iter: 20_000,
        gap_tol: Some(1e-12),
        grad_tol: Some(1e-12),
        ..SolverConfig::default()
    };
    match method {
        Method::Efw => {
            config.step_rule = StepRule::EfwOptimal {
                m: curvature_hat(ens, Geometry::Euclidean, 0),
            }
        }
        Method::Rfw => {
            config.step_rule = StepRule::EfwOptimal {
                m: curvature_hat(ens, Geometry::Riemannian, 0),
            }
        }
        Method::Rsd | Method::Richardson => {}
    }
    solve_mean(ens, method, &config).unwrap()
}
