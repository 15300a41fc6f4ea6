use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::ensemble::WeightedEnsemble;
use crate::error::Result;
use crate::frank_wolfe::{Objective, ObjectiveProblem};
use crate::manifold::{
    check_dims, relative_log_eigenvalues, sym_part, EigDecomposition, SpdMatrix, SqrtFactors, SymMatrix,
};
use crate::oracle::OperatorInterval;

/// Sums per-matrix terms in index order so the result does not depend on
/// how rayon schedules the map.
fn ordered_sum<T: Send>(terms: Vec<T>, zero: T, add: impl Fn(T, T) -> T) -> T {
    terms.into_iter().fold(zero, add)
}

/// `Σ w_i δ_R²(X, A_i)`.
pub fn karcher_cost(x: &SpdMatrix, ens: &WeightedEnsemble) -> Result<f64> {
    check_dims(ens.dim(), x.dim())?;
    let terms: Vec<f64> = ens
        .matrices()
        .par_iter()
        .zip(ens.weights())
        .map(|(a, &w)| w * relative_log_eigenvalues(x, a).iter().map(|l| l * l).sum::<f64>())
        .collect();
    Ok(ordered_sum(terms, 0.0, |a, b| a + b))
}

/// `Σ w_i log(X^{1/2} A_i⁻¹ X^{1/2})`, the shared middle factor of both gradients.
fn weighted_log_sum(f: &SqrtFactors, ens: &WeightedEnsemble) -> DMatrix<f64> {
    let d = ens.dim();
    let terms: Vec<DMatrix<f64>> = ens
        .inverses()
        .par_iter()
        .zip(ens.weights())
        .map(|(a_inv, &w)| {
            let inner = &f.sqrt * a_inv.as_matrix() * &f.sqrt;
            EigDecomposition::new(&sym_part(&inner)).map(f64::ln) * w
        })
        .collect();
    ordered_sum(terms, DMatrix::zeros(d, d), |a, b| a + b)
}

/// `Σ w_i X^{-1/2} log(X^{1/2} A_i⁻¹ X^{1/2}) X^{-1/2}`, which equals
/// `Σ w_i X⁻¹ log(X A_i⁻¹)`.
///
/// This is half the calculus gradient of [`karcher_cost`]; the factor does
/// not change Frank-Wolfe directions, and [`KarcherObjective`] restores it.
pub fn karcher_eucl_grad(x: &SpdMatrix, ens: &WeightedEnsemble) -> Result<SymMatrix> {
    check_dims(ens.dim(), x.dim())?;
    let f = SqrtFactors::new(x);
    let middle = weighted_log_sum(&f, ens);
    Ok(SymMatrix(sym_part(&(&f.inv_sqrt * middle * &f.inv_sqrt))))
}

/// `X·karcher_eucl_grad(X)·X = −Σ w_i Exp_X^{-1}(A_i)`.
pub fn karcher_riem_grad(x: &SpdMatrix, ens: &WeightedEnsemble) -> Result<SymMatrix> {
    check_dims(ens.dim(), x.dim())?;
    let f = SqrtFactors::new(x);
    let middle = weighted_log_sum(&f, ens);
    Ok(SymMatrix(f.color(&middle)))
}

/// `H = (Σ w_i A_i⁻¹)⁻¹`.
pub fn harmonic_mean(ens: &WeightedEnsemble) -> SpdMatrix {
    let d = ens.dim();
    let sum = ens
        .inverses()
        .iter()
        .zip(ens.weights())
        .fold(DMatrix::zeros(d, d), |acc, (a, &w)| acc + a.as_matrix() * w);
    SpdMatrix::trusted(sum).inverse()
}

/// `A = Σ w_i A_i`.
pub fn arithmetic_mean(ens: &WeightedEnsemble) -> SpdMatrix {
    let d = ens.dim();
    SpdMatrix::trusted(
        ens.iter()
            .fold(DMatrix::zeros(d, d), |acc, (w, a)| acc + a.as_matrix() * w),
    )
}

/// The interval `[H, A]`, which contains the Karcher mean.
pub fn feasible_interval(ens: &WeightedEnsemble) -> Result<OperatorInterval> {
    OperatorInterval::new(harmonic_mean(ens), arithmetic_mean(ens))
}

/// The Karcher cost as an [`Objective`], with the full (factor-two)
/// gradient so that gaps and curvature are on the scale of the cost.
#[derive(Clone, Debug)]
pub struct KarcherObjective {
    ensemble: Arc<WeightedEnsemble>,
}

impl KarcherObjective {
    pub fn new(ensemble: Arc<WeightedEnsemble>) -> Self {
        Self { ensemble }
    }

    pub fn ensemble(&self) -> &WeightedEnsemble {
        &self.ensemble
    }

    /// The objective over `[H, A]`.
    pub fn problem(ensemble: Arc<WeightedEnsemble>) -> Result<ObjectiveProblem> {
        let interval = feasible_interval(&ensemble)?;
        Ok(ObjectiveProblem::new(Self::new(ensemble), interval))
    }
}

impl Objective for KarcherObjective {
    fn cost(&self, x: &SpdMatrix) -> f64 {
        karcher_cost(x, &self.ensemble).unwrap_or(f64::NAN)
    }

    fn eucl_grad(&self, x: &SpdMatrix) -> DMatrix<f64> {
        match karcher_eucl_grad(x, &self.ensemble) {
            Ok(g) => g.into_inner() * 2.0,
            Err(_) => DMatrix::from_element(x.dim(), x.dim(), f64::NAN),
        }
    }
}
