use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::problem::CallCounts;
use crate::error::Result;
use crate::manifold::SpdMatrix;

/// One row of a convergence trace.
///
/// `fw_gap` holds the Frank-Wolfe gap for the FW solvers and the Riemannian
/// gradient norm for the gradient-type baselines. Timings are zero unless
/// the solver was asked to record them, so traces stay byte-reproducible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub cost: f64,
    pub fw_gap: f64,
    pub step_size: f64,
    pub oracle_time_s: f64,
    pub iter_time_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Gap (or gradient norm) fell below the tolerance.
    Tolerance,
    MaxIter,
    /// The step rule returned zero.
    StepVanished,
    /// Backtracking could not find a decrease.
    LineSearchExhausted,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Tolerance => "tolerance",
            StopReason::MaxIter => "max_iter",
            StopReason::StepVanished => "step_vanished",
            StopReason::LineSearchExhausted => "line_search_exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
    /// Gap at the starting point, an upper bound on the initial
    /// suboptimality for convex objectives.
    pub h0: f64,
    pub final_point: SpdMatrix,
    pub calls: CallCounts,
    pub stop: StopReason,
}

impl ConvergenceTrace {
    /// Number of updates performed; the trace has one more record.
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn final_record(&self) -> &TraceRecord {
        self.records.last().expect("a trace has at least one record")
    }

    pub fn final_cost(&self) -> f64 {
        self.final_record().cost
    }

    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.cost).collect()
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.fw_gap).collect()
    }

    /// `min_{k ≤ K} G(X_k)`.
    pub fn min_gap_up_to(&self, k: usize) -> f64 {
        self.records
            .iter()
            .take(k + 1)
            .map(|r| r.fw_gap)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
        let mut r = csv::Reader::from_reader(input);
        Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_csv(std::fs::File::create(dir.join(format!("{stem}.csv")))?)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.to_json()?)?;
        Ok(())
    }
}
