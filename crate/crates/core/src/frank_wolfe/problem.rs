use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::manifold::{SpdMatrix, SymMatrix};
use crate::oracle::OperatorInterval;

/// A smooth objective on the SPD cone.
///
/// Implementations must be pure: solvers and samplers may call them from
/// several threads, and determinism of every trace relies on repeated calls
/// returning identical bits.
pub trait Objective: Send + Sync {
    fn cost(&self, x: &SpdMatrix) -> f64;

    /// Euclidean gradient; callers symmetrize before use.
    fn eucl_grad(&self, x: &SpdMatrix) -> DMatrix<f64>;
}

/// Adapts a pair of closures into an [`Objective`].
pub struct FnObjective<C, G> {
    cost: C,
    grad: G,
}

impl<C, G> FnObjective<C, G>
where
    C: Fn(&SpdMatrix) -> f64 + Send + Sync,
    G: Fn(&SpdMatrix) -> DMatrix<f64> + Send + Sync,
{
    pub fn new(cost: C, grad: G) -> Self {
        Self { cost, grad }
    }
}

impl<C, G> Objective for FnObjective<C, G>
where
    C: Fn(&SpdMatrix) -> f64 + Send + Sync,
    G: Fn(&SpdMatrix) -> DMatrix<f64> + Send + Sync,
{
    fn cost(&self, x: &SpdMatrix) -> f64 {
        (self.cost)(x)
    }

    fn eucl_grad(&self, x: &SpdMatrix) -> DMatrix<f64> {
        (self.grad)(x)
    }
}

/// Call tallies, split so that cost evaluations made only for reporting are
/// not mixed with those a solver needs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallCounts {
    pub cost: usize,
    pub grad: usize,
    pub oracle: usize,
    pub report_cost: usize,
}

#[derive(Default)]
struct Counters {
    cost: AtomicUsize,
    grad: AtomicUsize,
    oracle: AtomicUsize,
    report_cost: AtomicUsize,
}

/// `min φ(X)` subject to `L ≼ X ≼ U`.
pub struct ObjectiveProblem {
    objective: Arc<dyn Objective>,
    interval: OperatorInterval,
    counters: Counters,
}

impl ObjectiveProblem {
    pub fn new(objective: impl Objective + 'static, interval: OperatorInterval) -> Self {
        Self::from_arc(Arc::new(objective), interval)
    }

    pub fn from_arc(objective: Arc<dyn Objective>, interval: OperatorInterval) -> Self {
        Self {
            objective,
            interval,
            counters: Counters::default(),
        }
    }

    pub fn interval(&self) -> &OperatorInterval {
        &self.interval
    }

    pub fn dim(&self) -> usize {
        self.interval.dim()
    }

    /// The objective without call accounting.
    pub fn objective(&self) -> &dyn Objective {
        self.objective.as_ref()
    }

    pub fn cost(&self, x: &SpdMatrix) -> f64 {
        self.counters.cost.fetch_add(1, Ordering::Relaxed);
        self.objective.cost(x)
    }

    /// Cost evaluated only to fill in a trace.
    pub fn report_cost(&self, x: &SpdMatrix) -> f64 {
        self.counters.report_cost.fetch_add(1, Ordering::Relaxed);
        self.objective.cost(x)
    }

    /// `∇^H φ(X)`, the symmetrized Euclidean gradient.
    pub fn grad(&self, x: &SpdMatrix) -> SymMatrix {
        self.counters.grad.fetch_add(1, Ordering::Relaxed);
        let g = self.objective.eucl_grad(x);
        SymMatrix((&g + g.transpose()) * 0.5)
    }

    pub(crate) fn count_oracle(&self) {
        self.counters.oracle.fetch_add(1, Ordering::Relaxed);
    }

    pub fn calls(&self) -> CallCounts {
        CallCounts {
            cost: self.counters.cost.load(Ordering::Relaxed),
            grad: self.counters.grad.load(Ordering::Relaxed),
            oracle: self.counters.oracle.load(Ordering::Relaxed),
            report_cost: self.counters.report_cost.load(Ordering::Relaxed),
        }
    }

    pub fn reset_calls(&self) {
        for c in [
            &self.counters.cost,
            &self.counters.grad,
            &self.counters.oracle,
            &self.counters.report_cost,
        ] {
            c.store(0, Ordering::Relaxed);
        }
    }
}

/// Central differences of `f` along the symmetric basis `E_ii`,
/// `E_ij + E_ji`, returned as the symmetric gradient matrix.
///
/// Off-diagonal directional derivatives count each entry twice and are
/// halved. Points within `h` of the cone boundary are the caller's problem.
pub fn finite_difference_gradient(f: impl Fn(&SpdMatrix) -> f64, x: &SpdMatrix, h: f64) -> DMatrix<f64> {
    let n = x.dim();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut e = DMatrix::zeros(n, n);
            e[(i, j)] = h;
            e[(j, i)] = h;
            let plus = f(&SpdMatrix::trusted(x.as_matrix() + &e));
            let minus = f(&SpdMatrix::trusted(x.as_matrix() - &e));
            let d = (plus - minus) / (2.0 * h);
            let v = if i == j { d } else { d / 2.0 };
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}
