//! Frank-Wolfe methods on intervals of symmetric positive definite matrices,
//! with an application to weighted Karcher means.
//!
//! The feasible sets are operator intervals `{X : L ≼ X ≼ U}`. Both
//! Frank-Wolfe variants solve their linear subproblem in closed form:
//! [`frank_wolfe::efw_solve`] steps along segments and
//! [`frank_wolfe::rfw_solve`] along affine-invariant geodesics. The
//! [`karcher`] module casts the Karcher mean as such a problem on the
//! interval between the harmonic and the arithmetic mean, and adds two
//! gradient-type baselines.
//!
//! ```
//! use spd_fw::karcher::{solve_mean, Method, SolverConfig, WeightedEnsemble};
//! use spd_fw::manifold::SpdMatrix;
//!
//! let ens = WeightedEnsemble::uniform(vec![
//!     SpdMatrix::from_diagonal(&[1.0, 9.0])?,
//!     SpdMatrix::from_diagonal(&[4.0, 1.0])?,
//! ])?;
//! let mean = solve_mean(&ens, Method::Rsd, &SolverConfig::default())?.mean;
//! // commuting matrices: entrywise geometric means
//! assert!((mean.as_matrix()[(0, 0)] - 2.0).abs() < 1e-6);
//! assert!((mean.as_matrix()[(1, 1)] - 3.0).abs() < 1e-6);
//! # Ok::<(), spd_fw::Error>(())
//! ```

// `!(x >= 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod frank_wolfe;
pub mod karcher;
pub mod manifold;
pub mod oracle;
pub mod random;

pub use error::{Error, Result};
