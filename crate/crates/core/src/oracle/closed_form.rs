use nalgebra::{DMatrix, DVector};

use super::interval::OperatorInterval;
use crate::error::Result;
use crate::manifold::{check_dims, psd_sqrt, sym_part, EigDecomposition, SpdMatrix, SymMatrix};

/// Intermediate spectra recorded by an oracle call.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleDiagnostics {
    /// Spectrum whose sign pattern selects the solution: `Λ` of
    /// `P S P` (Euclidean) or `D` of `S` (Riemannian), descending.
    pub sign_spectrum: Vec<f64>,
    /// Spectrum of the (transformed) interval width, descending.
    pub width_spectrum: Vec<f64>,
    /// Number of objective evaluations (brute-force oracle only).
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub z: SpdMatrix,
    pub objective_value: f64,
    pub diagnostics: OracleDiagnostics,
}

fn step_indicator(lambda: f64) -> f64 {
    if lambda >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Maximizes `tr(S Z)` over `L ≼ Z ≼ U`.
///
/// With `P = (U − L)^{1/2}` and `P S P = Q Λ Qᵀ` the maximizer is
/// `Z = L + P Q [sgn Λ]₊ Qᵀ P`. Zero eigenvalues select the upper branch.
pub fn euclid_oracle(s: &SymMatrix, interval: &OperatorInterval) -> Result<OracleSolution> {
    check_dims(interval.dim(), s.dim())?;
    if interval.is_degenerate() {
        return Ok(degenerate(interval, |z| s.as_matrix().dot(z.as_matrix())));
    }
    let p = interval.width_sqrt();
    let eig = EigDecomposition::new(&(p * s.as_matrix() * p));
    let projector = eig.map(step_indicator);
    let z = interval.from_contraction(&projector);
    Ok(OracleSolution {
        objective_value: s.as_matrix().dot(z.as_matrix()),
        z,
        diagnostics: OracleDiagnostics {
            sign_spectrum: eig.eigenvalues.iter().copied().collect(),
            width_spectrum: interval.width_spectrum().to_vec(),
            evaluations: 0,
        },
    })
}

/// Closed-form candidate for maximizing `tr(S log(X Z X))` over
/// `L ≼ Z ≼ U`.
///
/// Substituting `Y = X Z X` and `W = Qᵀ Y Q` with `S = Q D Qᵀ` moves the
/// bounds to `L'' = Qᵀ X L X Q`, `U'' = Qᵀ X U X Q`; the returned point is
/// `Z = X⁻¹ Q (P̂ [sgn D]₊ P̂ + L'') Qᵀ X⁻¹` with `P̂ = (U'' − L'')^{1/2}`.
///
/// The result is always feasible. It is the exact maximizer when `S`, `X`,
/// `L` and `U` commute, when `S` is definite, and in dimension one; for
/// general non-commuting data it is not guaranteed to be optimal.
pub fn riem_oracle(s: &SymMatrix, x: &SpdMatrix, interval: &OperatorInterval) -> Result<OracleSolution> {
    check_dims(interval.dim(), s.dim())?;
    check_dims(interval.dim(), x.dim())?;
    if interval.is_degenerate() {
        return Ok(degenerate(interval, |z| log_trace_objective(s, x, z)));
    }
    let xm = x.as_matrix();
    let s_eig = EigDecomposition::new(s.as_matrix());
    let q = &s_eig.eigenvectors;
    let qt = q.transpose();
    let lower2 = sym_part(&(&qt * xm * interval.lower().as_matrix() * xm * q));
    let upper2 = sym_part(&(&qt * xm * interval.upper().as_matrix() * xm * q));
    let (p_hat, width_eig) = psd_sqrt(&(&upper2 - &lower2));
    let selector = DMatrix::from_diagonal(&DVector::from_iterator(
        s_eig.eigenvalues.len(),
        s_eig.eigenvalues.iter().map(|&d| step_indicator(d)),
    ));
    let w = sym_part(&(&p_hat * selector * &p_hat + &lower2));

    // tr(S log Y) = tr(D log W)
    let log_w = EigDecomposition::new(&w).map(f64::ln);
    let objective_value: f64 = s_eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, d)| d * log_w[(i, i)])
        .sum();

    let y = q * &w * &qt;
    let x_inv = x.inverse();
    let z = SpdMatrix::trusted(x_inv.as_matrix() * y * x_inv.as_matrix());
    Ok(OracleSolution {
        z,
        objective_value,
        diagnostics: OracleDiagnostics {
            sign_spectrum: s_eig.eigenvalues.iter().copied().collect(),
            width_spectrum: width_eig.eigenvalues.iter().copied().collect(),
            evaluations: 0,
        },
    })
}

/// `tr(S log(X Z X))`.
pub fn log_trace_objective(s: &SymMatrix, x: &SpdMatrix, z: &SpdMatrix) -> f64 {
    let xm = x.as_matrix();
    let log_y = EigDecomposition::new(&(xm * z.as_matrix() * xm)).map(f64::ln);
    s.as_matrix().dot(&log_y)
}

/// A numerically point-like interval: choose the better endpoint.
fn degenerate(interval: &OperatorInterval, objective: impl Fn(&SpdMatrix) -> f64) -> OracleSolution {
    let at_lower = objective(interval.lower());
    let at_upper = objective(interval.upper());
    let (z, objective_value) = if at_upper > at_lower {
        (interval.upper().clone(), at_upper)
    } else {
        (interval.lower().clone(), at_lower)
    };
    OracleSolution {
        z,
        objective_value,
        diagnostics: OracleDiagnostics {
            sign_spectrum: Vec::new(),
            width_spectrum: interval.width_spectrum().to_vec(),
            evaluations: 2,
        },
    }
}
