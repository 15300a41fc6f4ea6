//! Randomized audit of the closed-form oracles against the brute-force
//! search. Backs the `oracle-check` CLI subcommand.

use serde::Serialize;

use super::{brute_force_oracle, euclid_oracle, feasibility_check, log_trace_objective, riem_oracle, OperatorInterval};
use crate::error::Result;
use crate::manifold::{SpdMatrix, SymMatrix};
use crate::random::{random_spd, random_symmetric, seeded};

/// Absolute-plus-relative slack allowed between a closed form and the search.
pub const OPTIMALITY_SLACK: f64 = 1e-6;

pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Euclidean,
    Riemannian,
}

/// Outcome for one oracle at one dimension.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheckRow {
    pub oracle: OracleKind,
    pub dim: usize,
    pub trials: usize,
    pub optimality_failures: usize,
    pub feasibility_failures: usize,
    /// Largest `search − closed_form` seen, in units of `1 + |closed_form|`.
    pub worst_excess: f64,
}

impl OracleCheckRow {
    pub fn passed(&self) -> bool {
        self.optimality_failures == 0 && self.feasibility_failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheckSummary {
    pub seed: u64,
    pub rows: Vec<OracleCheckRow>,
}

impl OracleCheckSummary {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(OracleCheckRow::passed)
    }
}

/// A random oracle instance: `S`, a point `X` and an interval `[L, L + W]`.
#[derive(Clone, Debug)]
pub struct OracleInstance {
    pub s: SymMatrix,
    pub x: SpdMatrix,
    pub interval: OperatorInterval,
}

pub fn random_instance(dim: usize, rng: &mut crate::random::SeededRng) -> Result<OracleInstance> {
    let lower = SpdMatrix::new(random_spd(dim, 0.3, rng))?;
    let width = random_spd(dim, 0.1, rng);
    let upper = SpdMatrix::new(lower.as_matrix() + width)?;
    let s = SymMatrix::new(random_symmetric(dim, rng))?;
    let x = SpdMatrix::new(random_spd(dim, 0.3, rng))?;
    Ok(OracleInstance {
        s,
        x,
        interval: OperatorInterval::new(lower, upper)?,
    })
}

/// Runs `trials` random instances per dimension through both closed forms
/// and the brute-force search.
pub fn oracle_check(dims: &[usize], trials: usize, seed: u64, budget: usize) -> Result<OracleCheckSummary> {
    let mut rows = Vec::new();
    let mut rng = seeded(seed);
    for &dim in dims {
        let mut euclid = OracleCheckRow::empty(OracleKind::Euclidean, dim);
        let mut riem = OracleCheckRow::empty(OracleKind::Riemannian, dim);
        for trial in 0..trials {
            let inst = random_instance(dim, &mut rng)?;
            let search_seed = seed ^ ((dim as u64) << 32) ^ trial as u64;

            let closed = euclid_oracle(&inst.s, &inst.interval)?;
            let search = brute_force_oracle(
                |z| inst.s.as_matrix().dot(z.as_matrix()),
                &inst.interval,
                budget,
                search_seed,
            )?;
            euclid.record(
                &closed.z,
                closed.objective_value,
                search.objective_value,
                &inst.interval,
            )?;

            let closed = riem_oracle(&inst.s, &inst.x, &inst.interval)?;
            let search = brute_force_oracle(
                |z| log_trace_objective(&inst.s, &inst.x, z),
                &inst.interval,
                budget,
                search_seed,
            )?;
            riem.record(
                &closed.z,
                closed.objective_value,
                search.objective_value,
                &inst.interval,
            )?;
        }
        rows.push(euclid);
        rows.push(riem);
    }
    Ok(OracleCheckSummary { seed, rows })
}

impl OracleCheckRow {
    fn empty(oracle: OracleKind, dim: usize) -> Self {
        Self {
            oracle,
            dim,
            trials: 0,
            optimality_failures: 0,
            feasibility_failures: 0,
            worst_excess: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, z: &SpdMatrix, closed: f64, search: f64, interval: &OperatorInterval) -> Result<()> {
        self.trials += 1;
        let excess = (search - closed) / (1.0 + closed.abs());
        self.worst_excess = self.worst_excess.max(excess);
        if excess > OPTIMALITY_SLACK {
            self.optimality_failures += 1;
        }
        if !feasibility_check(z, interval)?.feasible {
            self.feasibility_failures += 1;
        }
        Ok(())
    }
}
