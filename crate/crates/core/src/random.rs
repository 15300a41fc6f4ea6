//! Seeded random matrices used by the ensemble generator, the curvature
//! sampler and the brute-force oracle.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::manifold::sym_part;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal folded into `Q`.
pub fn haar_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `Q diag(λ) Qᵀ` with Haar `Q`.
pub fn with_spectrum<R: Rng>(spectrum: &[f64], rng: &mut R) -> DMatrix<f64> {
    let q = haar_orthogonal(spectrum.len(), rng);
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(spectrum));
    sym_part(&(&q * d * q.transpose()))
}

/// Random symmetric `R` with `0 ≼ R ≼ I`. With `extreme` the spectrum is
/// drawn from `{0, 1}` (an orthogonal projector), otherwise uniformly from
/// `[0, 1]`.
pub fn random_contraction<R: Rng>(dim: usize, extreme: bool, rng: &mut R) -> DMatrix<f64> {
    let spectrum: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = rng.random();
            if extreme {
                if u < 0.5 {
                    0.0
                } else {
                    1.0
                }
            } else {
                u
            }
        })
        .collect();
    with_spectrum(&spectrum, rng)
}

/// Symmetric matrix with i.i.d. Gaussian upper triangle.
pub fn random_symmetric<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    sym_part(&gaussian_matrix(dim, dim, rng))
}

/// Random SPD matrix `GGᵀ + shift·I`.
pub fn random_spd<R: Rng>(dim: usize, shift: f64, rng: &mut R) -> DMatrix<f64> {
    let g = gaussian_matrix(dim, dim, rng);
    let mut m = &g * g.transpose();
    for i in 0..dim {
        m[(i, i)] += shift;
    }
    sym_part(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_orthogonal() {
        let mut rng = seeded(3);
        let q = haar_orthogonal(5, &mut rng);
        assert!((q.transpose() * &q - DMatrix::identity(5, 5)).amax() < 1e-12);
    }

    #[test]
    fn contraction_spectrum_in_unit_interval() {
        let mut rng = seeded(4);
        for extreme in [false, true] {
            let r = random_contraction(4, extreme, &mut rng);
            let eig = crate::manifold::EigDecomposition::new(&r);
            assert!(eig.min() > -1e-12 && eig.max() < 1.0 + 1e-12);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = random_spd(3, 0.1, &mut seeded(9));
        let b = random_spd(3, 0.1, &mut seeded(9));
        assert_eq!(a, b);
    }
}
