//! CSV form of an [`IterationTrace`].
//!
//! One row per iterate:
//! `k, x_1..x_n, z_1..z_m, F_1..F_m, f, q2, step, z_residual,
//! sublevel_violation, descent_margin`. The step columns describe the move
//! from `x_k` to `x_{k+1}` and are empty on the last row. Numbers are
//! written in shortest round-trip form, so reading back is exact.

use std::io;

use lqdps::solver::{IterationRecord, IterationTrace, StepRecord};
use thiserror::Error;

const STEP_COLUMNS: [&str; 5] = ["q2", "step", "z_residual", "sublevel_violation", "descent_margin"];

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed trace header: {0}")]
    Header(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

fn header(n: usize, m: usize) -> Vec<String> {
    let mut h = vec!["k".to_string()];
    h.extend((1..=n).map(|i| format!("x_{i}")));
    h.extend((1..=m).map(|i| format!("z_{i}")));
    h.extend((1..=m).map(|i| format!("F_{i}")));
    h.push("f".into());
    h.extend(STEP_COLUMNS.iter().map(|s| s.to_string()));
    h
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_trace<W: io::Write>(trace: &IterationTrace, out: W) -> Result<(), TraceError> {
    let (n, m) = match trace.records.first() {
        Some(r) => (r.x.len(), r.z.len()),
        None => (0, 0),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(n, m))?;
    for r in &trace.records {
        let mut row = vec![r.k.to_string()];
        row.extend(r.x.iter().chain(&r.z).chain(&r.f_values).map(|v| num(*v)));
        row.push(num(r.scalarized));
        match &r.step {
            Some(s) => row.extend(
                [s.q2, s.step, s.z_residual, s.sublevel_violation, s.descent_margin]
                    .into_iter()
                    .map(num),
            ),
            None => row.extend(std::iter::repeat_n(String::new(), STEP_COLUMNS.len())),
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn count_prefix(h: &csv::StringRecord, prefix: &str) -> usize {
    h.iter().filter(|c| c.strip_prefix(prefix).is_some_and(|d| d.parse::<usize>().is_ok())).count()
}

/// Reads a trace written by [`write_trace`]; `n` and `m` come from the
/// header.
pub fn read_trace<R: io::Read>(input: R) -> Result<IterationTrace, TraceError> {
    let mut rd = csv::Reader::from_reader(input);
    let h = rd.headers()?.clone();
    let n = count_prefix(&h, "x_");
    let m = count_prefix(&h, "z_");
    let expected = header(n, m);
    if n == 0 || m == 0 || h.iter().ne(expected.iter().map(String::as_str)) {
        return Err(TraceError::Header(h.iter().collect::<Vec<_>>().join(",")));
    }
    let mut records = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let bad = |message: String| TraceError::Row { row: i + 1, message };
        let cell = |j: usize| -> Result<f64, TraceError> {
            row[j]
                .parse::<f64>()
                .map_err(|_| bad(format!("column {} has {:?}", expected[j], &row[j])))
        };
        let k: usize = row[0].parse().map_err(|_| bad(format!("bad k {:?}", &row[0])))?;
        if k != i {
            return Err(bad(format!("expected k = {i}, found {k}")));
        }
        let vals = |range: std::ops::Range<usize>| range.map(cell).collect::<Result<Vec<_>, _>>();
        let x = vals(1..1 + n)?;
        let z = vals(1 + n..1 + n + m)?;
        let f_values = vals(1 + n + m..1 + n + 2 * m)?;
        let base = 1 + n + 2 * m;
        let scalarized = cell(base)?;
        let step_cells = base + 1..base + 1 + STEP_COLUMNS.len();
        let step = if step_cells.clone().all(|j| row[j].is_empty()) {
            None
        } else {
            let s = vals(step_cells)?;
            Some(StepRecord {
                q2: s[0],
                step: s[1],
                z_residual: s[2],
                sublevel_violation: s[3],
                descent_margin: s[4],
            })
        };
        records.push(IterationRecord {
            k,
            x,
            z,
            f_values,
            scalarized,
            step,
        });
    }
    if records.is_empty() {
        return Err(TraceError::Header("trace has no rows".into()));
    }
    if records[..records.len() - 1].iter().any(|r| r.step.is_none()) {
        return Err(TraceError::Row {
            row: records.len(),
            message: "only the last row may lack step data".into(),
        });
    }
    Ok(IterationTrace { records, stop: None })
}
