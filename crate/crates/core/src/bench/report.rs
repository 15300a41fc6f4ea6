use std::fmt::Write as _;

use super::run::{BenchReport, MethodSummary};
use crate::error::{Error, Result};

/// Column order of the report CSV and table.
pub const REPORT_COLUMNS: [&str; 11] = [
    "method",
    "final_cost",
    "relative_gap",
    "iterations",
    "grad_calls",
    "cost_calls",
    "report_cost_calls",
    "oracle_calls",
    "wall_time_s",
    "stop",
    "error",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedReport {
    pub table: String,
    pub csv: String,
}

/// 17 significant digits, enough to reproduce every `f64` exactly.
fn exact(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(s: &MethodSummary) -> [String; 11] {
    [
        s.method.to_string(),
        exact(s.final_cost),
        exact(s.relative_gap),
        s.iterations.to_string(),
        s.grad_calls.to_string(),
        s.cost_calls.to_string(),
        s.report_cost_calls.to_string(),
        s.oracle_calls.to_string(),
        exact(s.wall_time_s),
        s.stop.map(|r| r.as_str().to_string()).unwrap_or_default(),
        s.error.clone().unwrap_or_default(),
    ]
}

/// Renders a fixed-width table and a CSV with the columns of
/// [`REPORT_COLUMNS`].
pub fn report_render(report: &BenchReport) -> Result<RenderedReport> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS)?;
    for s in &report.methods {
        w.write_record(row(s))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("csv output is UTF-8");

    let mut table = String::new();
    writeln!(
        table,
        "{:<11} {:>24} {:>12} {:>6} {:>6} {:>6} {:>7} {:>7} {:>10}  stop",
        "method", "final_cost", "rel_gap", "iters", "grad", "cost", "report", "oracle", "wall_s"
    )
    .unwrap();
    for s in &report.methods {
        let stop = match (&s.stop, &s.error) {
            (_, Some(e)) => format!("error: {e}"),
            (Some(r), None) => r.as_str().to_string(),
            (None, None) => String::new(),
        };
        writeln!(
            table,
            "{:<11} {:>24.16e} {:>12.4e} {:>6} {:>6} {:>6} {:>7} {:>7} {:>10.4}  {}",
            s.method.as_str(),
            s.final_cost,
            s.relative_gap,
            s.iterations,
            s.grad_calls,
            s.cost_calls,
            s.report_cost_calls,
            s.oracle_calls,
            s.wall_time_s,
            stop
        )
        .unwrap();
    }
    Ok(RenderedReport { table, csv })
}

/// Parses the CSV written by [`report_render`].
pub fn parse_report_csv(csv_text: &str) -> Result<Vec<MethodSummary>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != REPORT_COLUMNS {
        return Err(Error::InvalidConfig(format!("unexpected report columns {header:?}")));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let float = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad number `{}` in column {}", field(i), REPORT_COLUMNS[i])))
        };
        let int = |i: usize| -> Result<usize> {
            field(i)
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad count `{}` in column {}", field(i), REPORT_COLUMNS[i])))
        };
        let stop = match field(9) {
            "" => None,
            s => Some(serde_json::from_value(serde_json::Value::String(s.to_string()))?),
        };
        out.push(MethodSummary {
            method: field(0).parse()?,
            final_cost: float(1)?,
            relative_gap: float(2)?,
            iterations: int(3)?,
            grad_calls: int(4)?,
            cost_calls: int(5)?,
            report_cost_calls: int(6)?,
            oracle_calls: int(7)?,
            wall_time_s: float(8)?,
            stop,
            error: Some(field(10).to_string()).filter(|e| !e.is_empty()),
        });
    }
    Ok(out)
}
