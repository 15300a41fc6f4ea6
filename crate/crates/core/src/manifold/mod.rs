//! Primitives of the affine-invariant Riemannian geometry on symmetric
//! positive definite matrices.
//!
//! Points are [`SpdMatrix`] values and tangent vectors are [`SymMatrix`]
//! values; the tangent space at every point is identified with the symmetric
//! matrices. The metric at `X` is `⟨A, B⟩_X = tr(X⁻¹ A X⁻¹ B)`, which is
//! invariant under congruences `X ↦ Mᵀ X M`. All matrix functions are
//! computed through a symmetric eigendecomposition, and composite products
//! are symmetrized before they are returned.

mod functions;
mod geometry;
mod types;

pub use functions::{matrix_fn, MatrixFn, Symmetric};
pub use geometry::{directional_pairing, distance, exp_map, geodesic, inner, log_map, riem_grad, tangent_norm};
pub use types::{symmetrize, EigDecomposition, MatrixRepr, SpdMatrix, SymMatrix, PD_TOL, SYMMETRY_TOL};

pub(crate) use functions::{psd_sqrt, SqrtFactors};
pub(crate) use geometry::relative_log_eigenvalues;
pub(crate) use types::{check_dims, sym_part};
