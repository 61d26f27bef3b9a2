//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 on success, 1 on usage, IO or
//! validation errors, 2 when an audit or property check fails.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use lqdps::scalarization::Scalarization;
use lqdps::solver::{audit_trace, fixed_point_weak_pareto, run_lqdps, RunError, StopReason};

use crate::config::load_config;
use crate::props::run_props;
use crate::table::{render_markdown, run_table, write_csv, TableOverrides};
use crate::trace_io::{read_trace, write_trace};
use crate::{format_checks, trace_checks};

#[derive(Parser)]
#[command(name = "lqdps", version, about = "Proximal point scalarization for multi-objective minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem described by a config file and write its trace.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the 15-row benchmark grid for example 1, 2 or 3.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        example: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run the trace audits on a trace CSV.
    Audit {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Run every sampling property suite.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Whether a command that ran to completion found problems.
enum Verdict {
    Pass,
    Fail,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn cmd_run(config: &Path, dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<Verdict> {
    let spec = load_config(config)?;
    let problem = spec.problem.problem();
    let model = Scalarization::new(spec.scalarization, problem.objectives())?;
    let qdist = spec.quasi_distance()?;
    let result = match run_lqdps(&problem, model, &qdist, &spec.config, &spec.x0, &spec.z0) {
        Ok(r) => r,
        Err(RunError::Invalid(e)) => return Err(e.into()),
        Err(e @ RunError::Aborted { .. }) => {
            writeln!(err, "{e}")?;
            return Ok(Verdict::Fail);
        }
    };
    writeln!(out, "problem: {}", spec.problem)?;
    writeln!(out, "scalarization: {}", spec.scalarization)?;
    writeln!(out, "stop: {}", result.stop)?;
    writeln!(out, "iterations: {}", result.iterations)?;
    writeln!(out, "x: {:?}", result.x)?;
    writeln!(out, "z: {:?}", result.z)?;
    if let Ok(d) = problem.pareto_set_distance(&result.x) {
        writeln!(out, "pareto set distance: {d:e}")?;
    }
    if result.stop == StopReason::FixedPoint {
        let v = fixed_point_weak_pareto(&result.trace, &problem, spec.seed)?;
        writeln!(out, "weak pareto candidate: {}", v.is_weak_pareto_candidate)?;
    }
    let checks = trace_checks(&result.audit);
    write!(out, "{}", format_checks(&checks))?;

    let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(format!("{stem}.trace.csv"));
    write_trace(&result.trace, create(&path)?)?;
    writeln!(out, "trace: {}", path.display())?;
    Ok(if checks.iter().all(|c| c.ok) { Verdict::Pass } else { Verdict::Fail })
}

fn cmd_table(example: u32, dir: &Path, seed: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<Verdict> {
    let overrides = TableOverrides {
        seed,
        ..TableOverrides::default()
    };
    let report = run_table(example, &overrides)?;
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let csv_path = dir.join(format!("example{example}.csv"));
    write_csv(&report, create(&csv_path)?)?;
    let md_path = dir.join(format!("example{example}.md"));
    let md = render_markdown(&report);
    fs::write(&md_path, &md).with_context(|| format!("cannot write {}", md_path.display()))?;
    write!(out, "{md}")?;
    writeln!(out, "\nwrote {} and {}", csv_path.display(), md_path.display())?;
    let mut ok = true;
    for r in &report.records {
        match &r.outcome {
            Ok(o) => {
                for c in trace_checks(&o.audit).iter().filter(|c| !c.ok) {
                    ok = false;
                    writeln!(err, "row {} {}: {} failed: {}", r.row.number, r.scalarization, c.name, c.detail)?;
                }
            }
            Err(e) => {
                ok = false;
                writeln!(err, "row {} {}: {e}", r.row.number, r.scalarization)?;
            }
        }
    }
    Ok(if ok { Verdict::Pass } else { Verdict::Fail })
}

fn cmd_audit(path: &Path, out: &mut dyn Write) -> Result<Verdict> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let trace = read_trace(file).with_context(|| format!("cannot read trace {}", path.display()))?;
    let audit = audit_trace(&trace)?;
    writeln!(out, "iterates: {}", trace.records.len())?;
    let checks = trace_checks(&audit);
    write!(out, "{}", format_checks(&checks))?;
    Ok(if checks.iter().all(|c| c.ok) { Verdict::Pass } else { Verdict::Fail })
}

fn cmd_props(seed: u64, out: &mut dyn Write) -> Result<Verdict> {
    let outcome = run_props(seed)?;
    write!(out, "{}", outcome.text)?;
    Ok(if outcome.passed { Verdict::Pass } else { Verdict::Fail })
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let outcome = match cli.command {
        Command::Run { config, out: dir } => cmd_run(&config, &dir, out, err),
        Command::Table { example, out: dir, seed } => cmd_table(example, &dir, seed, out, err),
        Command::Audit { trace } => cmd_audit(&trace, out),
        Command::Props { seed } => cmd_props(seed, out),
    };
    match outcome {
        Ok(Verdict::Pass) => 0,
        Ok(Verdict::Fail) => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
