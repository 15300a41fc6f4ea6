use nalgebra::DMatrix;
use rayon::prelude::*;

use super::closed_form::{OracleDiagnostics, OracleSolution};
use super::interval::OperatorInterval;
use crate::error::{Error, Result};
use crate::manifold::{sym_part, EigDecomposition, SpdMatrix};
use crate::random::{random_contraction, seeded};

/// Largest dimension accepted by [`brute_force_oracle`].
pub const MAX_BRUTE_FORCE_DIM: usize = 4;
/// Smallest sampling budget accepted by [`brute_force_oracle`].
pub const MIN_BRUTE_FORCE_BUDGET: usize = 1000;

const ASCENT_STARTS: usize = 20;
const ASCENT_STEPS: usize = 400;
const FD_STEP: f64 = 1e-6;

/// Maximizes an arbitrary objective over `L ≼ Z ≼ U` by search.
///
/// Works in the coordinates `Z = L + P R P`, `P = (U − L)^{1/2}`, where the
/// feasible set is `0 ≼ R ≼ I` and the projection clips eigenvalues of `R`
/// to `[0, 1]`. Returns the best of projected-gradient ascent from 20 random
/// starts (finite-difference gradients) and `budget` random feasible samples,
/// half of which are extreme points (`R` an orthogonal projector). In
/// dimension one a golden-section search on `[l, u]` replaces the ascent.
///
/// Deterministic for a given seed: all random draws happen up front, the
/// ascents run in parallel, and the reduction keeps the lowest index on ties.
pub fn brute_force_oracle<F>(
    objective: F,
    interval: &OperatorInterval,
    budget: usize,
    seed: u64,
) -> Result<OracleSolution>
where
    F: Fn(&SpdMatrix) -> f64 + Sync,
{
    let dim = interval.dim();
    if dim > MAX_BRUTE_FORCE_DIM {
        return Err(Error::InvalidConfig(format!(
            "brute-force oracle limited to dimension {MAX_BRUTE_FORCE_DIM}, got {dim}"
        )));
    }
    if budget < MIN_BRUTE_FORCE_BUDGET {
        return Err(Error::InvalidConfig(format!(
            "brute-force budget must be at least {MIN_BRUTE_FORCE_BUDGET}, got {budget}"
        )));
    }

    let eval = |r: &DMatrix<f64>| objective(&interval.from_contraction(r));

    let mut rng = seeded(seed);
    let starts: Vec<DMatrix<f64>> = (0..ASCENT_STARTS)
        .map(|i| random_contraction(dim, i % 2 == 1, &mut rng))
        .collect();
    let samples: Vec<DMatrix<f64>> = (0..budget)
        .map(|i| random_contraction(dim, i % 2 == 1, &mut rng))
        .collect();

    let mut candidates: Vec<(DMatrix<f64>, f64, usize)> = if dim == 1 {
        vec![golden_section(&eval)]
    } else {
        starts
            .par_iter()
            .map(|r0| projected_ascent(&eval, r0.clone()))
            .collect()
    };
    candidates.extend(samples.par_iter().map(|r| (r.clone(), eval(r), 1)).collect::<Vec<_>>());

    let evaluations = candidates.iter().map(|c| c.2).sum();
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.1 > candidates[best].1 {
            best = i;
        }
    }
    let (r, objective_value, _) = candidates.swap_remove(best);
    Ok(OracleSolution {
        z: interval.from_contraction(&r),
        objective_value,
        diagnostics: OracleDiagnostics {
            sign_spectrum: Vec::new(),
            width_spectrum: interval.width_spectrum().to_vec(),
            evaluations,
        },
    })
}

fn project(r: &DMatrix<f64>) -> DMatrix<f64> {
    EigDecomposition::new(r).map(|v| v.clamp(0.0, 1.0))
}

fn fd_gradient(eval: &impl Fn(&DMatrix<f64>) -> f64, r: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let n = r.nrows();
    let mut g = DMatrix::zeros(n, n);
    let mut count = 0;
    for i in 0..n {
        for j in i..n {
            let mut e = DMatrix::zeros(n, n);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            let plus = eval(&(r + &e * FD_STEP));
            let minus = eval(&(r - &e * FD_STEP));
            count += 2;
            let d = (plus - minus) / (2.0 * FD_STEP);
            // directional derivative along e_ij + e_ji is 2 G_ij off the diagonal
            let gij = if i == j { d } else { d / 2.0 };
            g[(i, j)] = gij;
            g[(j, i)] = gij;
        }
    }
    (g, count)
}

fn projected_ascent(eval: &impl Fn(&DMatrix<f64>) -> f64, start: DMatrix<f64>) -> (DMatrix<f64>, f64, usize) {
    let mut r = project(&start);
    let mut value = eval(&r);
    let mut evaluations = 1;
    let mut step = f64::NAN;
    for _ in 0..ASCENT_STEPS {
        let (g, used) = fd_gradient(eval, &r);
        evaluations += used;
        let gnorm = g.norm();
        if !(gnorm > 1e-14) {
            break;
        }
        if step.is_nan() {
            step = 0.25 / gnorm;
        }
        let mut improved = false;
        while step * gnorm > 1e-12 {
            let candidate = project(&sym_part(&(&r + &g * step)));
            let v = eval(&candidate);
            evaluations += 1;
            if v > value {
                improved = (v - value) > 1e-15 * (1.0 + value.abs());
                r = candidate;
                value = v;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (r, value, evaluations)
}

fn golden_section(eval: &impl Fn(&DMatrix<f64>) -> f64) -> (DMatrix<f64>, f64, usize) {
    let at = |t: f64| eval(&DMatrix::from_element(1, 1, t));
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (at(c), at(d));
    let mut evaluations = 2;
    while b - a > 1e-12 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = at(d);
        }
        evaluations += 1;
    }
    let mut best = (0.5 * (a + b), at(0.5 * (a + b)));
    for t in [0.0, 1.0] {
        let v = at(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    (DMatrix::from_element(1, 1, best.0), best.1, evaluations + 3)
}
