//! Affine-invariant geometry: metric, geodesics, distance and the
//! exponential/logarithm maps.

use nalgebra::DMatrix;

use super::functions::SqrtFactors;
use super::types::{check_dims, check_square, sym_part, EigDecomposition, SpdMatrix, SymMatrix};
use crate::error::{Error, Result};

/// `tr(X⁻¹ A X⁻¹ B)`.
pub fn inner(base: &SpdMatrix, a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    check_dims(base.dim(), a.dim())?;
    check_dims(base.dim(), b.dim())?;
    let (xa, xb) = match base.as_matrix().clone().cholesky() {
        Some(chol) => (chol.solve(a.as_matrix()), chol.solve(b.as_matrix())),
        None => {
            let inv = base.inverse();
            (inv.as_matrix() * a.as_matrix(), inv.as_matrix() * b.as_matrix())
        }
    };
    // tr(PQ) = sum_ij P_ij Q_ji
    Ok(xa.component_mul(&xb.transpose()).sum())
}

/// Norm of a tangent vector under the metric at `base`.
pub fn tangent_norm(base: &SpdMatrix, a: &SymMatrix) -> Result<f64> {
    Ok(inner(base, a, a)?.max(0.0).sqrt())
}

/// The geodesic `X^{1/2} (X^{-1/2} Y X^{-1/2})^t X^{1/2}`, i.e. `X #_t Y`.
pub fn geodesic(x: &SpdMatrix, y: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_dims(x.dim(), y.dim())?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t == 1.0 {
        return Ok(y.clone());
    }
    let f = SqrtFactors::new(x);
    let inner = EigDecomposition::new(&f.whiten(y.as_matrix())).map(|v| v.powf(t));
    Ok(SpdMatrix::trusted(f.color(&inner)))
}

/// Riemannian distance `‖log(X^{-1/2} Y X^{-1/2})‖_F`.
pub fn distance(x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    Ok(relative_log_eigenvalues(x, y).iter().map(|l| l * l).sum::<f64>().sqrt())
}

/// Logarithms of the eigenvalues of `X^{-1/2} Y X^{-1/2}`.
pub(crate) fn relative_log_eigenvalues(x: &SpdMatrix, y: &SpdMatrix) -> Vec<f64> {
    let whitened = match x.as_matrix().clone().cholesky() {
        Some(chol) => {
            // C⁻¹ Y C⁻ᵀ is congruent to X^{-1/2} Y X^{-1/2} by an orthogonal map
            let l = chol.l();
            let left = l
                .solve_lower_triangular(y.as_matrix())
                .expect("cholesky factor is invertible");
            let both = l
                .solve_lower_triangular(&left.transpose())
                .expect("cholesky factor is invertible");
            sym_part(&both)
        }
        None => SqrtFactors::new(x).whiten(y.as_matrix()),
    };
    EigDecomposition::new(&whitened)
        .eigenvalues
        .iter()
        .map(|v| v.ln())
        .collect()
}

/// `Exp_X(A) = X^{1/2} exp(X^{-1/2} A X^{-1/2}) X^{1/2}`.
pub fn exp_map(x: &SpdMatrix, a: &SymMatrix) -> Result<SpdMatrix> {
    check_dims(x.dim(), a.dim())?;
    let f = SqrtFactors::new(x);
    let inner = EigDecomposition::new(&f.whiten(a.as_matrix())).map(f64::exp);
    Ok(SpdMatrix::trusted(f.color(&inner)))
}

/// `Exp_X^{-1}(Y) = X^{1/2} log(X^{-1/2} Y X^{-1/2}) X^{1/2}`.
pub fn log_map(x: &SpdMatrix, y: &SpdMatrix) -> Result<SymMatrix> {
    check_dims(x.dim(), y.dim())?;
    let f = SqrtFactors::new(x);
    let inner = EigDecomposition::new(&f.whiten(y.as_matrix())).map(f64::ln);
    Ok(SymMatrix(f.color(&inner)))
}

/// Riemannian gradient `X sym(∇φ) X` from a Euclidean gradient.
pub fn riem_grad(x: &SpdMatrix, eucl_grad: &DMatrix<f64>) -> Result<SymMatrix> {
    check_square(eucl_grad)?;
    check_dims(x.dim(), eucl_grad.nrows())?;
    let g = sym_part(eucl_grad);
    Ok(SymMatrix(sym_part(&(x.as_matrix() * g * x.as_matrix()))))
}

/// `⟨X^{1/2} sym(∇φ) X^{1/2}, log(X^{-1/2} Y X^{-1/2})⟩`, which equals
/// `⟨grad φ(X), Exp_X^{-1}(Y)⟩_X`.
pub fn directional_pairing(x: &SpdMatrix, eucl_grad: &DMatrix<f64>, y: &SpdMatrix) -> Result<f64> {
    check_square(eucl_grad)?;
    check_dims(x.dim(), eucl_grad.nrows())?;
    check_dims(x.dim(), y.dim())?;
    let f = SqrtFactors::new(x);
    let colored = f.color(&sym_part(eucl_grad));
    let log = EigDecomposition::new(&f.whiten(y.as_matrix())).map(f64::ln);
    Ok(colored.dot(&log))
}
