//! The benchmark experiment grid: 15 schedule/tolerance rows, each run with
//! both scalarizations, reported as CSV and as a markdown table.

use std::fmt::Write as _;
use std::io;

use lqdps::benchmarks::{benchmark_quasi_distance, BenchmarkId};
use lqdps::scalarization::{Scalarization, ScalarizationKind};
use lqdps::solver::{fixed_point_weak_pareto, run_lqdps, AuditSummary, LqdpsConfig, RunResult, Schedule, StopReason};
use lqdps::subproblem::{InnerSolverConfig, ProxMode};
use rayon::prelude::*;

/// One row of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub number: usize,
    pub tol: f64,
    pub mu: Schedule,
    pub beta: Schedule,
}

/// Rows 1-15: three tolerances for each of five `(mu, beta)` pairs.
pub fn experiment_grid() -> Vec<ExperimentRow> {
    let pairs = [
        (Schedule::OnePlusInvK, Schedule::OnePlusInvK),
        (Schedule::OnePlusInvK, Schedule::KLinear),
        (Schedule::TwoMinusInvK, Schedule::InvK),
        (Schedule::TwoMinusInvK, Schedule::KLinear),
        (Schedule::Constant(1.0), Schedule::Constant(1.0)),
    ];
    let mut rows = Vec::with_capacity(15);
    for (mu, beta) in pairs {
        for tol in [1e-2, 1e-3, 1e-4] {
            rows.push(ExperimentRow {
                number: rows.len() + 1,
                tol,
                mu,
                beta,
            });
        }
    }
    rows
}

/// Settings shared by every run of a table. `seed` drives the sampled
/// weak Pareto check of runs that stop at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct TableOverrides {
    pub max_iter: usize,
    pub inner: InnerSolverConfig,
    pub seed: u64,
}

impl Default for TableOverrides {
    fn default() -> Self {
        TableOverrides {
            max_iter: 100,
            inner: InnerSolverConfig::default(),
            seed: 0,
        }
    }
}

/// Outcome of one `(row, scalarization)` run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub row: ExperimentRow,
    pub scalarization: ScalarizationKind,
    pub outcome: Result<RunOutcome, String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub iterations: usize,
    pub stop: StopReason,
    pub ps_distance: f64,
    pub ps_distance_start: f64,
    pub audit: AuditSummary,
    pub all_in_box: bool,
    /// Sampled weak Pareto verdict, for runs that stop at a fixed point.
    pub weak_pareto: Option<bool>,
    pub result: RunResult,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub example: u32,
    pub problem: BenchmarkId,
    pub records: Vec<RunRecord>,
}

impl TableReport {
    pub fn record(&self, row: usize, kind: ScalarizationKind) -> Option<&RunRecord> {
        self.records.iter().find(|r| r.row.number == row && r.scalarization == kind)
    }
}

pub fn config_for(row: &ExperimentRow, overrides: &TableOverrides) -> LqdpsConfig {
    LqdpsConfig {
        max_iter: overrides.max_iter,
        inner: overrides.inner.clone(),
        ..LqdpsConfig::new(row.mu, row.beta, ProxMode::QSquared, row.tol)
    }
}

fn run_one(id: BenchmarkId, row: ExperimentRow, kind: ScalarizationKind, overrides: &TableOverrides) -> RunRecord {
    let problem = id.problem();
    let qdist = benchmark_quasi_distance();
    let outcome = Scalarization::new(kind, id.objectives())
        .map_err(|e| e.to_string())
        .and_then(|model| {
            let config = config_for(&row, overrides);
            let x0 = id.default_x0();
            let result = run_lqdps(&problem, model, &qdist, &config, &x0, &id.default_z0()).map_err(|e| e.to_string())?;
            let weak_pareto = match result.stop {
                StopReason::FixedPoint => Some(
                    fixed_point_weak_pareto(&result.trace, &problem, overrides.seed)
                        .map_err(|e| e.to_string())?
                        .is_weak_pareto_candidate,
                ),
                _ => None,
            };
            let ps = |x: &[f64]| problem.pareto_set_distance(x).map_err(|e| e.to_string());
            Ok(RunOutcome {
                iterations: result.iterations,
                stop: result.stop,
                ps_distance: ps(&result.x)?,
                ps_distance_start: ps(&x0)?,
                audit: result.audit.clone(),
                all_in_box: result.trace.records.iter().all(|r| problem.bounds().contains(&r.x)),
                weak_pareto,
                result,
            })
        });
    RunRecord {
        row,
        scalarization: kind,
        outcome,
    }
}

/// Runs all 15 rows with both scalarizations for example 1 (`fa`), 2 (`fb`)
/// or 3 (`fc`). Runs execute in parallel; records come back in grid order.
pub fn run_table(example: u32, overrides: &TableOverrides) -> lqdps::Result<TableReport> {
    let problem = BenchmarkId::from_example(example)?;
    let jobs: Vec<(ExperimentRow, ScalarizationKind)> = experiment_grid()
        .into_iter()
        .flat_map(|row| ScalarizationKind::ALL.into_iter().map(move |k| (row, k)))
        .collect();
    let records = jobs
        .into_par_iter()
        .map(|(row, kind)| run_one(problem, row, kind, overrides))
        .collect();
    Ok(TableReport {
        example,
        problem,
        records,
    })
}

pub const CSV_HEADER: [&str; 9] = [
    "row",
    "tol",
    "mu",
    "beta",
    "scalarization",
    "iters",
    "ps_dist",
    "stop",
    "descent_violations",
];

pub fn write_csv<W: io::Write>(report: &TableReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.records {
        let (iters, dist, stop, viol) = match &r.outcome {
            Ok(o) => (
                o.iterations.to_string(),
                format!("{:e}", o.ps_distance),
                o.stop.to_string(),
                o.audit.monotonicity_violations.to_string(),
            ),
            Err(e) => (String::new(), String::new(), format!("error: {e}"), String::new()),
        };
        w.write_record([
            r.row.number.to_string(),
            format!("{:e}", r.row.tol),
            r.row.mu.to_string(),
            r.row.beta.to_string(),
            r.scalarization.to_string(),
            iters,
            dist,
            stop,
            viol,
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn pretty_schedule(s: &Schedule) -> String {
    match s {
        Schedule::Constant(c) => format!("{c}"),
        other => other.to_string(),
    }
}

/// Markdown table with one line per row: tolerance, schedules, then
/// iterations and final Pareto-set distance for each scalarization.
pub fn render_markdown(report: &TableReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## Example {} ({})\n", report.example, report.problem);
    let _ = writeln!(
        s,
        "| No. | tol | mu_k | beta_k | k1* (sum_shifted) | dist_inf (sum_shifted) | k2* (exponential) | dist_inf (exponential) |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for row in experiment_grid() {
        let cell = |kind| match report.record(row.number, kind).map(|r| &r.outcome) {
            Some(Ok(o)) => (o.iterations.to_string(), format!("{:.6e}", o.ps_distance)),
            Some(Err(_)) => ("error".to_string(), "-".to_string()),
            None => ("-".to_string(), "-".to_string()),
        };
        let (k1, d1) = cell(ScalarizationKind::SumShifted);
        let (k2, d2) = cell(ScalarizationKind::Exponential);
        let _ = writeln!(
            s,
            "| {} | {:e} | {} | {} | {} | {} | {} | {} |",
            row.number,
            row.tol,
            pretty_schedule(&row.mu),
            pretty_schedule(&row.beta),
            k1,
            d1,
            k2,
            d2
        );
    }
    s
}
