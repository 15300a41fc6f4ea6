use serde::{Deserialize, Serialize};

use super::problem::ObjectiveProblem;
use super::solver::Geometry;
use crate::error::{Error, Result};
use crate::manifold::{directional_pairing, distance, geodesic, SpdMatrix};
use crate::random::{random_contraction, seeded};

/// Smallest sample count accepted by [`estimate_curvature`].
pub const MIN_CURVATURE_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureMethod {
    /// Largest scaled Bregman gap seen over random feasible triples. A lower
    /// bound on the true curvature constant.
    Sampled,
    /// `L·diam²` from a supplied smoothness constant.
    LipschitzBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureEstimate {
    pub m_phi: f64,
    pub method: CurvatureMethod,
    pub lipschitz: Option<f64>,
    /// Largest pairwise distance among the sampled feasible points.
    pub diameter: f64,
    pub samples: usize,
}

fn draw_points(problem: &ObjectiveProblem, samples: usize, seed: u64) -> Vec<(SpdMatrix, SpdMatrix)> {
    let mut rng = seeded(seed);
    let dim = problem.dim();
    let interval = problem.interval();
    (0..samples)
        .map(|i| {
            let x = interval.from_contraction(&random_contraction(dim, false, &mut rng));
            let z = interval.from_contraction(&random_contraction(dim, i % 2 == 0, &mut rng));
            (x, z)
        })
        .collect()
}

fn diameter(points: &[(SpdMatrix, SpdMatrix)], geometry: Geometry) -> Result<f64> {
    let flat: Vec<&SpdMatrix> = points.iter().flat_map(|(x, z)| [x, z]).collect();
    let mut diam: f64 = 0.0;
    for (i, a) in flat.iter().enumerate() {
        for b in &flat[i + 1..] {
            let d = match geometry {
                Geometry::Euclidean => (a.as_matrix() - b.as_matrix()).norm(),
                Geometry::Riemannian => distance(a, b)?,
            };
            diam = diam.max(d);
        }
    }
    Ok(diam)
}

/// Samples `(2/η²)[φ(Y) − φ(X) − η⟨grad φ(X), Z − X⟩]` with `Y` on the
/// segment (Euclidean) or geodesic (Riemannian) from `X` to `Z` at
/// `η ∈ {0.1, …, 1.0}`, over `samples` random feasible pairs.
///
/// Calls bypass the problem's counters.
pub fn estimate_curvature(
    problem: &ObjectiveProblem,
    geometry: Geometry,
    samples: usize,
    seed: u64,
) -> Result<CurvatureEstimate> {
    if samples < MIN_CURVATURE_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "curvature estimation needs at least {MIN_CURVATURE_SAMPLES} samples, got {samples}"
        )));
    }
    let points = draw_points(problem, samples, seed);
    let objective = problem.objective();
    let mut m_phi: f64 = 0.0;
    for (x, z) in &points {
        let fx = objective.cost(x);
        let g = objective.eucl_grad(x);
        let slope = match geometry {
            Geometry::Euclidean => g.dot(&(z.as_matrix() - x.as_matrix())),
            Geometry::Riemannian => directional_pairing(x, &g, z)?,
        };
        for step in 1..=10 {
            let eta = step as f64 / 10.0;
            let y = match geometry {
                Geometry::Euclidean => SpdMatrix::trusted(x.as_matrix() * (1.0 - eta) + z.as_matrix() * eta),
                Geometry::Riemannian => geodesic(x, z, eta)?,
            };
            let value = 2.0 / (eta * eta) * (objective.cost(&y) - fx - eta * slope);
            if value.is_finite() {
                m_phi = m_phi.max(value);
            }
        }
    }
    Ok(CurvatureEstimate {
        m_phi,
        method: CurvatureMethod::Sampled,
        lipschitz: None,
        diameter: diameter(&points, geometry)?,
        samples,
    })
}

/// `M_φ ≤ L·diam²` with the diameter estimated from `samples` random pairs.
pub fn lipschitz_curvature_bound(
    problem: &ObjectiveProblem,
    geometry: Geometry,
    lipschitz: f64,
    samples: usize,
    seed: u64,
) -> Result<CurvatureEstimate> {
    if !(lipschitz >= 0.0) || !lipschitz.is_finite() {
        return Err(Error::OutOfRange {
            name: "L",
            value: lipschitz,
            range: "[0, inf)",
        });
    }
    if samples < MIN_CURVATURE_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "curvature estimation needs at least {MIN_CURVATURE_SAMPLES} samples, got {samples}"
        )));
    }
    let diam = diameter(&draw_points(problem, samples, seed), geometry)?;
    Ok(CurvatureEstimate {
        m_phi: lipschitz * diam * diam,
        method: CurvatureMethod::LipschitzBound,
        lipschitz: Some(lipschitz),
        diameter: diam,
        samples,
    })
}

/// Riemannian radius of the largest geodesic ball around `x` that stays in
/// `[L, U]`: `min(log λ_min(X^{-1/2} U X^{-1/2}), −log λ_max(X^{-1/2} L X^{-1/2}))`.
///
/// Nonpositive when `x` touches or leaves the interval.
pub fn interior_radius(x: &SpdMatrix, interval: &crate::oracle::OperatorInterval) -> Result<f64> {
    use crate::manifold::relative_log_eigenvalues;
    crate::manifold::check_dims(x.dim(), interval.dim())?;
    let up = relative_log_eigenvalues(x, interval.upper());
    let low = relative_log_eigenvalues(x, interval.lower());
    let to_upper = up.iter().copied().fold(f64::INFINITY, f64::min);
    let to_lower = -low.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(to_upper.min(to_lower))
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::frank_wolfe::FnObjective;
    use crate::oracle::OperatorInterval;

    fn interval() -> OperatorInterval {
        let l = SpdMatrix::from_row_slice(2, &[1.0, 0.2, 0.2, 1.0]).unwrap();
        let u = SpdMatrix::from_row_slice(2, &[3.0, 0.5, 0.5, 4.0]).unwrap();
        OperatorInterval::new(l, u).unwrap()
    }

    fn linear() -> ObjectiveProblem {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 2.0]);
        let s2 = s.clone();
        ObjectiveProblem::new(
            FnObjective::new(
                move |x: &SpdMatrix| s.dot(x.as_matrix()),
                move |_: &SpdMatrix| s2.clone(),
            ),
            interval(),
        )
    }

    #[test]
    fn linear_objective_has_no_euclidean_curvature() {
        let est = estimate_curvature(&linear(), Geometry::Euclidean, 20, 1).unwrap();
        assert!(est.m_phi <= 1e-9, "{}", est.m_phi);
        assert!(est.diameter > 0.0);
    }

    #[test]
    fn sampled_below_lipschitz_bound() {
        // φ(X) = ‖X‖²/2 is 1-smooth in the Frobenius norm
        let p = ObjectiveProblem::new(
            FnObjective::new(
                |x: &SpdMatrix| 0.5 * x.as_matrix().norm_squared(),
                |x: &SpdMatrix| x.as_matrix().clone(),
            ),
            interval(),
        );
        let sampled = estimate_curvature(&p, Geometry::Euclidean, 50, 7).unwrap();
        let bound = lipschitz_curvature_bound(&p, Geometry::Euclidean, 1.0, 50, 7).unwrap();
        assert!(sampled.m_phi > 0.0);
        assert!(sampled.m_phi <= bound.m_phi * (1.0 + 1e-12));
        assert_eq!(bound.m_phi, bound.diameter * bound.diameter);
    }

    #[test]
    fn deterministic_and_guarded() {
        let p = linear();
        let a = estimate_curvature(&p, Geometry::Riemannian, 12, 5).unwrap();
        let b = estimate_curvature(&p, Geometry::Riemannian, 12, 5).unwrap();
        assert_eq!(a, b);
        assert!(estimate_curvature(&p, Geometry::Riemannian, 9, 5).is_err());
    }

    #[test]
    fn interior_radius_of_scalar_interval() {
        let iv = OperatorInterval::new(
            SpdMatrix::from_diagonal(&[1.0]).unwrap(),
            SpdMatrix::from_diagonal(&[4.0]).unwrap(),
        )
        .unwrap();
        let r = interior_radius(&SpdMatrix::from_diagonal(&[2.0]).unwrap(), &iv).unwrap();
        assert!((r - 2.0_f64.ln()).abs() < 1e-15);
        let edge = interior_radius(&SpdMatrix::from_diagonal(&[1.0]).unwrap(), &iv).unwrap();
        assert!(edge.abs() < 1e-15);
    }
}
