use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry invariant.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Relative threshold (against the largest eigenvalue) below which a matrix
/// is not accepted as positive definite.
pub const PD_TOL: f64 = 1e-10;

/// Returns `(M + Mᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> Result<SymMatrix> {
    check_square(m)?;
    Ok(SymMatrix(sym_part(m)))
}

pub(crate) fn sym_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m + m.transpose();
    out *= 0.5;
    out
}

pub(crate) fn check_square(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let asym = asymmetry(m);
    if asym > SYMMETRY_TOL * (1.0 + m.amax()) || !asym.is_finite() {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigDecomposition {
    /// Decomposes the symmetric part of `m`.
    pub fn new(m: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(sym_part(m));
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `Q f(Λ) Qᵀ`, symmetrized.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = f(lambda);
            scaled.column_mut(j).scale_mut(v);
        }
        sym_part(&(scaled * self.eigenvectors.transpose()))
    }

    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.map(|x| x)
    }
}

/// A symmetric matrix: a tangent vector at a point of the manifold, or a
/// (symmetrized) Euclidean gradient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SymMatrix(pub(crate) DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square(&m)?;
        check_symmetric(&m)?;
        Ok(Self(sym_part(&m)))
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(from_rows(dim, entries)?)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn eig(&self) -> EigDecomposition {
        EigDecomposition::new(&self.0)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(&self.0 * a)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Frobenius pairing `tr(self · other)`.
    pub fn frobenius_dot(&self, other: &SymMatrix) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// A symmetric positive definite matrix: a point of the manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SpdMatrix(pub(crate) DMatrix<f64>);

impl SpdMatrix {
    /// Validates symmetry and positive definiteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square(&m)?;
        check_symmetric(&m)?;
        let m = sym_part(&m);
        let eig = EigDecomposition::new(&m);
        check_pd(&eig)?;
        Ok(Self(m))
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(from_rows(dim, entries)?)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Wraps the symmetric part of a matrix known to be positive definite by
    /// construction (outputs of congruences, geodesics, convex combinations).
    pub(crate) fn trusted(m: DMatrix<f64>) -> Self {
        Self(sym_part(&m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn eig(&self) -> EigDecomposition {
        EigDecomposition::new(&self.0)
    }

    pub fn as_sym(&self) -> SymMatrix {
        SymMatrix(self.0.clone())
    }

    /// Re-validates the invariants (useful after long computations).
    pub fn validate(&self) -> Result<()> {
        check_symmetric(&self.0)?;
        check_pd(&self.eig())
    }

    pub fn inverse(&self) -> SpdMatrix {
        let inv = match self.0.clone().cholesky() {
            Some(chol) => chol.inverse(),
            None => self.eig().map(|x| 1.0 / x),
        };
        SpdMatrix::trusted(inv)
    }

    /// Scales every entry by `a > 0`.
    pub fn scale(&self, a: f64) -> SpdMatrix {
        SpdMatrix::trusted(&self.0 * a)
    }

    /// `Mᵀ X M` for an invertible `M`.
    pub fn congruence(&self, m: &DMatrix<f64>) -> Result<SpdMatrix> {
        check_square(m)?;
        check_dims(self.dim(), m.nrows())?;
        SpdMatrix::new(sym_part(&(m.transpose() * &self.0 * m)))
    }
}

fn check_pd(eig: &EigDecomposition) -> Result<()> {
    let threshold = PD_TOL * eig.max().max(0.0);
    let min = eig.min();
    if !(min > threshold) || !min.is_finite() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
            threshold,
        });
    }
    Ok(())
}

fn from_rows(dim: usize, entries: &[f64]) -> Result<DMatrix<f64>> {
    if dim == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    check_dims(dim * dim, entries.len())?;
    Ok(DMatrix::from_row_slice(dim, dim, entries))
}

impl fmt::Display for SpdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// JSON form shared by all matrices: explicit dimension and row-major entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl MatrixRepr {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(m[(i, j)]);
            }
        }
        Self { dim, entries }
    }
}

impl TryFrom<MatrixRepr> for SpdMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        SpdMatrix::from_row_slice(r.dim, &r.entries)
    }
}

impl TryFrom<MatrixRepr> for SymMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        SymMatrix::from_row_slice(r.dim, &r.entries)
    }
}

impl From<SpdMatrix> for MatrixRepr {
    fn from(m: SpdMatrix) -> Self {
        MatrixRepr::from_matrix(&m.0)
    }
}

impl From<SymMatrix> for MatrixRepr {
    fn from(m: SymMatrix) -> Self {
        MatrixRepr::from_matrix(&m.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_off_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let s = symmetrize(&m).unwrap();
        assert_eq!(s.as_matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn symmetrize_rejects_rectangular() {
        let m = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(symmetrize(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let m = DMatrix::from_fn(4, 4, |i, j| (i * 7 + j * 3) as f64 - 5.0);
        let once = symmetrize(&m).unwrap();
        let twice = symmetrize(once.as_matrix()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn spd_rejects_indefinite() {
        let err = SpdMatrix::from_diagonal(&[1.0, -1.0]).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
        // relative threshold: 1e-12 vs largest eigenvalue 1
        assert!(SpdMatrix::from_diagonal(&[1.0, 1e-12]).is_err());
        assert!(SpdMatrix::from_diagonal(&[1.0, 1e-9]).is_ok());
    }

    #[test]
    fn spd_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.1, 0.0, 2.0]);
        assert!(matches!(SpdMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eig_descending_and_reconstructs() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 1.0]);
        let eig = EigDecomposition::new(&m);
        assert!(eig.eigenvalues[0] >= eig.eigenvalues[1]);
        assert!(eig.eigenvalues[1] >= eig.eigenvalues[2]);
        let err = (eig.reconstruct() - &m).norm() / m.norm();
        assert!(err < 1e-10);
        let qtq = eig.eigenvectors.transpose() * &eig.eigenvectors;
        assert!((qtq - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn json_is_row_major() {
        let m = SymMatrix::from_row_slice(2, &[1.0, 2.0, 2.0, 5.0]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"dim":2,"entries":[1.0,2.0,2.0,5.0]}"#);
        let back: SymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"dim":2,"entries":[1.0,0.0,0.0,-1.0]}"#;
        assert!(serde_json::from_str::<SpdMatrix>(bad).is_err());
    }
}
