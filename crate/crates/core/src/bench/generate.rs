use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::karcher::WeightedEnsemble;
use crate::manifold::SpdMatrix;
use crate::random::{seeded, with_spectrum};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    /// `w_i = 1/n`.
    #[default]
    Uniform,
    /// Uniform on the simplex (normalized exponential draws).
    RandomSimplex,
}

impl std::str::FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightScheme::Uniform),
            "random-simplex" | "simplex" => Ok(WeightScheme::RandomSimplex),
            other => Err(Error::InvalidConfig(format!(
                "unknown weight scheme `{other}` (expected uniform or random-simplex)"
            ))),
        }
    }
}

/// `count` random SPD matrices `Q_i D_i Q_iᵀ` of size `dim`, with Haar `Q_i`
/// and eigenvalues drawn log-uniformly from `[1, condition_number]`.
///
/// A condition number of exactly one yields identity matrices.
pub fn gen_ensemble(
    dim: usize,
    count: usize,
    seed: u64,
    condition_number: f64,
    weights: WeightScheme,
) -> Result<WeightedEnsemble> {
    if dim == 0 || count == 0 {
        return Err(Error::InvalidConfig(format!(
            "dimension and count must be at least 1 (got {dim} and {count})"
        )));
    }
    if !(condition_number >= 1.0) || !condition_number.is_finite() {
        return Err(Error::OutOfRange {
            name: "condition_number",
            value: condition_number,
            range: "[1, inf)",
        });
    }
    let mut rng = seeded(seed);
    let log_cond = condition_number.ln();
    let mut matrices = Vec::with_capacity(count);
    for _ in 0..count {
        if condition_number == 1.0 {
            matrices.push(SpdMatrix::identity(dim));
            continue;
        }
        let spectrum: Vec<f64> = (0..dim).map(|_| (rng.random::<f64>() * log_cond).exp()).collect();
        matrices.push(SpdMatrix::new(with_spectrum(&spectrum, &mut rng))?);
    }
    let w = match weights {
        WeightScheme::Uniform => vec![1.0 / count as f64; count],
        WeightScheme::RandomSimplex => {
            let draws: Vec<f64> = (0..count).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = draws.iter().sum();
            draws.iter().map(|d| d / total).collect()
        }
    };
    WeightedEnsemble::new(matrices, w)
}
