use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::manifold::{check_dims, psd_sqrt, EigDecomposition, SpdMatrix};

/// Relative tolerance on `λ_min(U − L)` when validating `L ≼ U`.
pub const ORDER_TOL: f64 = 1e-10;

/// Relative tolerance used by [`feasibility_check`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Relative width below which an interval is treated as the single point `L`.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// The operator interval `{Z : L ≼ Z ≼ U}` in the Löwner order.
///
/// Construction precomputes the square root of the width `U − L`, which
/// both closed-form oracles and the samplers reuse.
#[derive(Clone, Debug)]
pub struct OperatorInterval {
    lower: SpdMatrix,
    upper: SpdMatrix,
    width_sqrt: DMatrix<f64>,
    width_spectrum: Vec<f64>,
    scale: f64,
}

impl OperatorInterval {
    pub fn new(lower: SpdMatrix, upper: SpdMatrix) -> Result<Self> {
        check_dims(lower.dim(), upper.dim())?;
        let scale = upper.eig().max();
        let width = upper.as_matrix() - lower.as_matrix();
        let (width_sqrt, eig) = psd_sqrt(&width);
        if eig.min() < -ORDER_TOL * scale {
            return Err(Error::InvalidInterval(format!(
                "U - L has eigenvalue {:e} below -{ORDER_TOL:e}·‖U‖",
                eig.min()
            )));
        }
        Ok(Self {
            lower,
            upper,
            width_sqrt,
            width_spectrum: eig.eigenvalues.iter().copied().collect(),
            scale,
        })
    }

    /// The degenerate interval `[X, X]`.
    pub fn point(x: SpdMatrix) -> Self {
        Self::new(x.clone(), x).expect("a point is a valid interval")
    }

    pub fn lower(&self) -> &SpdMatrix {
        &self.lower
    }

    pub fn upper(&self) -> &SpdMatrix {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// Spectral norm of `U`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `(U − L)^{1/2}`.
    pub fn width_sqrt(&self) -> &DMatrix<f64> {
        &self.width_sqrt
    }

    /// Eigenvalues of `U − L`, descending.
    pub fn width_spectrum(&self) -> &[f64] {
        &self.width_spectrum
    }

    /// True when `U − L` is numerically zero.
    pub fn is_degenerate(&self) -> bool {
        self.width_spectrum[0] <= DEGENERATE_TOL * self.scale
    }

    /// `L + (U−L)^{1/2} R (U−L)^{1/2}`; feasible for every `0 ≼ R ≼ I`.
    pub fn from_contraction(&self, r: &DMatrix<f64>) -> SpdMatrix {
        SpdMatrix::trusted(self.lower.as_matrix() + &self.width_sqrt * r * &self.width_sqrt)
    }
}

/// Eigenvalue margins of `Z` against an interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `λ_min(Z − L)`
    pub lower_margin: f64,
    /// `λ_min(U − Z)`
    pub upper_margin: f64,
    pub tolerance: f64,
}

/// Checks `L ≼ Z ≼ U` up to `1e-9·‖U‖` in eigenvalue terms.
pub fn feasibility_check(z: &SpdMatrix, interval: &OperatorInterval) -> Result<FeasibilityReport> {
    check_dims(interval.dim(), z.dim())?;
    let lower_margin = EigDecomposition::new(&(z.as_matrix() - interval.lower.as_matrix())).min();
    let upper_margin = EigDecomposition::new(&(interval.upper.as_matrix() - z.as_matrix())).min();
    let tolerance = FEASIBILITY_TOL * interval.scale;
    Ok(FeasibilityReport {
        feasible: lower_margin >= -tolerance && upper_margin >= -tolerance,
        lower_margin,
        upper_margin,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::geodesic;

    fn interval() -> OperatorInterval {
        let l = SpdMatrix::from_row_slice(2, &[1.0, 0.2, 0.2, 1.0]).unwrap();
        let u = SpdMatrix::from_row_slice(2, &[3.0, 0.5, 0.5, 4.0]).unwrap();
        OperatorInterval::new(l, u).unwrap()
    }

    #[test]
    fn rejects_reversed_order() {
        let l = SpdMatrix::from_diagonal(&[2.0, 1.0]).unwrap();
        let u = SpdMatrix::from_diagonal(&[1.0, 3.0]).unwrap();
        assert!(matches!(OperatorInterval::new(l, u), Err(Error::InvalidInterval(_))));
    }

    #[test]
    fn lower_endpoint_is_feasible_with_zero_margin() {
        let iv = interval();
        let r = feasibility_check(iv.lower(), &iv).unwrap();
        assert!(r.feasible);
        assert!(r.lower_margin.abs() < 1e-15);
    }

    #[test]
    fn doubled_upper_is_infeasible() {
        let iv = interval();
        let r = feasibility_check(&iv.upper().scale(2.0), &iv).unwrap();
        assert!(!r.feasible);
    }

    #[test]
    fn geodesic_midpoint_of_endpoints_is_feasible() {
        let iv = interval();
        let mid = geodesic(iv.lower(), iv.upper(), 0.5).unwrap();
        let r = feasibility_check(&mid, &iv).unwrap();
        assert!(r.feasible, "{r:?}");
        assert!(r.lower_margin > 0.0 && r.upper_margin > 0.0);
    }

    #[test]
    fn point_interval_is_degenerate() {
        let iv = OperatorInterval::point(SpdMatrix::identity(3));
        assert!(iv.is_degenerate());
        assert!(!interval().is_degenerate());
    }
}
