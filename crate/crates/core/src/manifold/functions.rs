use nalgebra::DMatrix;

use super::types::{sym_part, SpdMatrix, SymMatrix};
use crate::error::{Error, Result};

/// Scalar functions that can be lifted to symmetric matrices through the
/// eigendecomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixFn {
    Exp,
    Log,
    Sqrt,
    InvSqrt,
    Power(f64),
}

impl MatrixFn {
    fn name(self) -> &'static str {
        match self {
            MatrixFn::Exp => "exp",
            MatrixFn::Log => "log",
            MatrixFn::Sqrt => "sqrt",
            MatrixFn::InvSqrt => "inv_sqrt",
            MatrixFn::Power(_) => "power",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            MatrixFn::Exp => x.exp(),
            MatrixFn::Log => x.ln(),
            MatrixFn::Sqrt => x.sqrt(),
            MatrixFn::InvSqrt => 1.0 / x.sqrt(),
            MatrixFn::Power(t) => x.powf(t),
        }
    }
}

/// Anything backed by a symmetric matrix.
pub trait Symmetric {
    fn matrix(&self) -> &DMatrix<f64>;
}

impl Symmetric for SymMatrix {
    fn matrix(&self) -> &DMatrix<f64> {
        self.as_matrix()
    }
}

impl Symmetric for SpdMatrix {
    fn matrix(&self) -> &DMatrix<f64> {
        self.as_matrix()
    }
}

/// `Q f(Λ) Qᵀ` for a symmetric input. Every function except `exp` requires a
/// positive definite argument; the offending eigenvalue is reported otherwise.
pub fn matrix_fn<M: Symmetric>(x: &M, f: MatrixFn) -> Result<SymMatrix> {
    let eig = super::types::EigDecomposition::new(x.matrix());
    if f != MatrixFn::Exp && !(eig.min() > 0.0) {
        return Err(Error::Domain {
            function: f.name(),
            eigenvalue: eig.min(),
        });
    }
    Ok(SymMatrix(eig.map(|v| f.apply(v))))
}

/// Square root and inverse square root of a point, computed from one
/// eigendecomposition and reused by the maps that whiten by `X^{-1/2}`.
#[derive(Clone, Debug)]
pub(crate) struct SqrtFactors {
    pub sqrt: DMatrix<f64>,
    pub inv_sqrt: DMatrix<f64>,
}

impl SqrtFactors {
    pub fn new(x: &SpdMatrix) -> Self {
        let eig = x.eig();
        Self {
            sqrt: eig.map(f64::sqrt),
            inv_sqrt: eig.map(|v| 1.0 / v.sqrt()),
        }
    }

    /// `X^{-1/2} Y X^{-1/2}`
    pub fn whiten(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        sym_part(&(&self.inv_sqrt * y * &self.inv_sqrt))
    }

    /// `X^{1/2} C X^{1/2}`
    pub fn color(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        sym_part(&(&self.sqrt * c * &self.sqrt))
    }
}

/// Square root of a positive semidefinite matrix; eigenvalues below zero
/// (round-off) are clamped.
pub(crate) fn psd_sqrt(m: &DMatrix<f64>) -> (DMatrix<f64>, super::types::EigDecomposition) {
    let eig = super::types::EigDecomposition::new(m);
    (eig.map(|v| v.max(0.0).sqrt()), eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_identity_is_zero() {
        let l = matrix_fn(&SpdMatrix::identity(3), MatrixFn::Log).unwrap();
        assert_eq!(l.as_matrix().amax(), 0.0);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let d = SpdMatrix::from_diagonal(&[4.0, 9.0]).unwrap();
        let s = matrix_fn(&d, MatrixFn::Sqrt).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        assert!((s.as_matrix() - expected).amax() < 1e-14);
    }

    #[test]
    fn log_rejects_non_positive() {
        let s = SymMatrix::from_diagonal(&[1.0, -2.0]);
        match matrix_fn(&s, MatrixFn::Log) {
            Err(Error::Domain { function, eigenvalue }) => {
                assert_eq!(function, "log");
                assert_eq!(eigenvalue, -2.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matrix_fn(&s, MatrixFn::Exp).is_ok());
    }

    #[test]
    fn power_matches_repeated_product() {
        let x = SpdMatrix::from_row_slice(2, &[2.0, 0.5, 0.5, 1.0]).unwrap();
        let p = matrix_fn(&x, MatrixFn::Power(2.0)).unwrap();
        let sq = x.as_matrix() * x.as_matrix();
        assert!((p.as_matrix() - sq).amax() < 1e-13);
    }
}
