//! The outer proximal loop, its parameter schedules and the audits that can be
//! run on a finished trace.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error as ThisError;

use crate::error::{check_len, Error, Result};
use crate::math::dist_inf;
use crate::problem::{EvalPolicy, MultiObjectiveProblem, ParetoVerdict};
use crate::quasi_metric::QuasiDistance;
use crate::scalarization::{LogRegularizer, Scalarization};
use crate::subproblem::{solve_subproblem, InnerSolverConfig, ProxMode, SubproblemInstance};

/// Slack allowed on the monotonicity of `f(x_k, z_k)`.
pub const MONOTONICITY_SLACK: f64 = 1e-9;

/// Parameter schedule evaluated at `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `1 + 1/k`
    OnePlusInvK,
    /// `k`
    KLinear,
    /// `2 - 1/k`
    TwoMinusInvK,
    /// `1/k`
    InvK,
    Constant(f64),
}

impl Schedule {
    pub fn eval(&self, k: usize) -> Result<f64> {
        if k < 1 {
            return Err(Error::input("schedules are indexed from k = 1"));
        }
        let k = k as f64;
        Ok(match *self {
            Schedule::OnePlusInvK => 1.0 + 1.0 / k,
            Schedule::KLinear => k,
            Schedule::TwoMinusInvK => 2.0 - 1.0 / k,
            Schedule::InvK => 1.0 / k,
            Schedule::Constant(c) => c,
        })
    }

    pub fn is_vanishing(&self) -> bool {
        matches!(self, Schedule::InvK)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::OnePlusInvK => f.write_str("1+1/k"),
            Schedule::KLinear => f.write_str("k"),
            Schedule::TwoMinusInvK => f.write_str("2-1/k"),
            Schedule::InvK => f.write_str("1/k"),
            Schedule::Constant(c) => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "1+1/k" => Ok(Schedule::OnePlusInvK),
            "k" => Ok(Schedule::KLinear),
            "2-1/k" => Ok(Schedule::TwoMinusInvK),
            "1/k" => Ok(Schedule::InvK),
            other => {
                let value = other.strip_prefix("const:").unwrap_or(other);
                value
                    .parse::<f64>()
                    .map(Schedule::Constant)
                    .map_err(|_| Error::input(alloc::format!("unknown schedule `{s}`")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LqdpsConfig {
    pub mu: Schedule,
    pub beta: Schedule,
    pub mode: ProxMode,
    /// Stop once `|x_k - x_{k+1}|_inf <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub inner: InnerSolverConfig,
    /// `(l, L)` with `l < mu_k < L` required in `q2` mode. Defaults to
    /// [`LqdpsConfig::DEFAULT_MU_BOUNDS`] when unset.
    pub mu_bounds: Option<(f64, f64)>,
    /// Accepts a non-`1/k` mu schedule in `q` mode.
    pub mu_vanishing_asserted: bool,
}

impl LqdpsConfig {
    pub const DEFAULT_MU_BOUNDS: (f64, f64) = (0.5, 10.0);

    pub fn new(mu: Schedule, beta: Schedule, mode: ProxMode, tol: f64) -> Self {
        LqdpsConfig {
            mu,
            beta,
            mode,
            tol,
            max_iter: 100,
            inner: InnerSolverConfig::default(),
            mu_bounds: None,
            mu_vanishing_asserted: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::config("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be at least 1"));
        }
        self.inner.validate()?;
        for k in 1..=self.max_iter {
            let (mu, beta) = (self.mu.eval(k)?, self.beta.eval(k)?);
            if !(mu > 0.0 && mu.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::config(alloc::format!("schedules must stay positive, k = {k}")));
            }
        }
        match self.mode {
            ProxMode::QSquared => {
                let (l, upper) = self.mu_bounds.unwrap_or(Self::DEFAULT_MU_BOUNDS);
                if !(0.0 < l && l < upper) {
                    return Err(Error::config("mu bounds must satisfy 0 < l < L"));
                }
                for k in 1..=self.max_iter {
                    let mu = self.mu.eval(k)?;
                    if !(l < mu && mu < upper) {
                        return Err(Error::config(alloc::format!(
                            "mu = {mu} at k = {k} violates {l} < mu < {upper}"
                        )));
                    }
                }
            }
            ProxMode::QPlain => {
                if !self.mu.is_vanishing() && !self.mu_vanishing_asserted {
                    return Err(Error::config("mode q needs a vanishing mu schedule such as 1/k"));
                }
            }
        }
        Ok(())
    }
}

/// Quantities attached to the transition `k -> k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// `q^2(x_{k+1}, x_k)`
    pub q2: f64,
    /// `|x_k - x_{k+1}|_inf`
    pub step: f64,
    pub z_residual: f64,
    /// Violation of `Omega_k` by `x_{k+1}`.
    pub sublevel_violation: f64,
    pub descent_margin: f64,
}

/// State `(x_k, z_k)` and, except for the last record, the step leaving it.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub f_values: Vec<f64>,
    pub scalarized: f64,
    pub step: Option<StepRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    TolReached,
    FixedPoint,
    MaxIter,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::TolReached => "tol_reached",
            StopReason::FixedPoint => "fixed_point",
            StopReason::MaxIter => "max_iter",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tol_reached" => Ok(StopReason::TolReached),
            "fixed_point" => Ok(StopReason::FixedPoint),
            "max_iter" => Ok(StopReason::MaxIter),
            other => Err(Error::input(alloc::format!("unknown stop reason `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub stop: Option<StopReason>,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn steps(&self) -> impl Iterator<Item = &StepRecord> {
        self.records.iter().filter_map(|r| r.step.as_ref())
    }
}

/// Audit of a trace; every field is computed from the trace alone.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditSummary {
    /// Number of `k` with `f_{k+1} > f_k + MONOTONICITY_SLACK`.
    pub monotonicity_violations: usize,
    pub worst_increase: f64,
    /// Partial sums of `q^2(x_{k+1}, x_k)`.
    pub q2_partial_sums: Vec<f64>,
    pub q2_last: f64,
    pub max_sublevel_violation: f64,
    pub max_z_residual: f64,
    pub min_descent_margin: f64,
    /// Largest `|x_k - x_{k+1}|_inf` among the first five steps.
    pub max_early_step: f64,
    pub final_step: f64,
}

impl AuditSummary {
    pub fn q2_total(&self) -> f64 {
        self.q2_partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn partial_sums_nondecreasing(&self) -> bool {
        self.q2_partial_sums.windows(2).all(|w| w[1] >= w[0]) && self.q2_partial_sums.iter().all(|v| v.is_finite())
    }
}

pub fn audit_trace(trace: &IterationTrace) -> Result<AuditSummary> {
    if trace.records.is_empty() {
        return Err(Error::input("cannot audit an empty trace"));
    }
    let mut summary = AuditSummary {
        monotonicity_violations: 0,
        worst_increase: f64::NEG_INFINITY,
        q2_partial_sums: Vec::new(),
        q2_last: 0.0,
        max_sublevel_violation: 0.0,
        max_z_residual: 0.0,
        min_descent_margin: f64::INFINITY,
        max_early_step: 0.0,
        final_step: 0.0,
    };
    for w in trace.records.windows(2) {
        let increase = w[1].scalarized - w[0].scalarized;
        summary.worst_increase = summary.worst_increase.max(increase);
        if !(increase <= MONOTONICITY_SLACK) {
            summary.monotonicity_violations += 1;
        }
    }
    let mut total = 0.0;
    for (i, s) in trace.steps().enumerate() {
        total += s.q2;
        summary.q2_partial_sums.push(total);
        summary.q2_last = s.q2;
        summary.max_sublevel_violation = summary.max_sublevel_violation.max(s.sublevel_violation);
        summary.max_z_residual = summary.max_z_residual.max(s.z_residual);
        summary.min_descent_margin = summary.min_descent_margin.min(s.descent_margin);
        if i < 5 {
            summary.max_early_step = summary.max_early_step.max(s.step);
        }
        summary.final_step = s.step;
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub iterations: usize,
    pub stop: StopReason,
    pub trace: IterationTrace,
    pub audit: AuditSummary,
}

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum RunError {
    #[error("invalid run setup: {0}")]
    Invalid(#[source] Error),
    #[error("run aborted after {} iterations: {source}", trace.records.len().saturating_sub(1))]
    Aborted {
        #[source]
        source: Error,
        trace: IterationTrace,
    },
}

impl RunError {
    pub fn error(&self) -> &Error {
        match self {
            RunError::Invalid(e) => e,
            RunError::Aborted { source, .. } => source,
        }
    }
}

/// Runs the proximal scalarization method from `(x0, z0)`.
///
/// Outer iteration `k` uses `mu(k + 1)`, `beta(k + 1)` and the sublevel set
/// anchored at `x_k`.
pub fn run_lqdps<Q: QuasiDistance + ?Sized>(
    problem: &MultiObjectiveProblem,
    model: Scalarization,
    qdist: &Q,
    config: &LqdpsConfig,
    x0: &[f64],
    z0: &[f64],
) -> core::result::Result<RunResult, RunError> {
    config.validate().map_err(RunError::Invalid)?;
    check_len(problem.dim(), x0).map_err(RunError::Invalid)?;
    check_len(problem.objectives(), z0).map_err(RunError::Invalid)?;
    LogRegularizer::new(z0.to_vec()).map_err(RunError::Invalid)?;
    if !problem.bounds().contains(x0) {
        return Err(RunError::Invalid(Error::input("x0 lies outside the box")));
    }

    let mut trace = IterationTrace::default();
    let mut x = x0.to_vec();
    let mut z = z0.to_vec();
    let state = |x: &[f64], z: &[f64], k: usize| -> Result<IterationRecord> {
        let f_values = problem.evaluate(x, EvalPolicy::Strict)?;
        let scalarized = model.eval(&f_values, z)?;
        Ok(IterationRecord {
            k,
            x: x.to_vec(),
            z: z.to_vec(),
            f_values,
            scalarized,
            step: None,
        })
    };
    let first = state(&x, &z, 0).map_err(RunError::Invalid)?;
    trace.records.push(first);

    let mut stop = StopReason::MaxIter;
    let mut iterations = 0;
    for k in 0..config.max_iter {
        let outcome = (|| -> Result<(Vec<f64>, Vec<f64>, StepRecord, IterationRecord)> {
            let mu = config.mu.eval(k + 1)?;
            let beta = config.beta.eval(k + 1)?;
            let inst = SubproblemInstance::new(problem, model, qdist, config.mode, mu, beta, &x, &z)?;
            let (x_next, z_next, cert) = solve_subproblem(&inst, &config.inner)?;
            let next = state(&x_next, &z_next, k + 1)?;
            let step = StepRecord {
                q2: qdist.eval_sq(&x_next, &x)?,
                step: dist_inf(&x, &x_next),
                z_residual: cert.z_residual,
                sublevel_violation: inst.omega.violation_of(&next.f_values),
                descent_margin: cert.descent_margin,
            };
            Ok((x_next, z_next, step, next))
        })();
        let (x_next, z_next, step, next) = match outcome {
            Ok(v) => v,
            Err(source) => {
                trace.stop = None;
                return Err(RunError::Aborted { source, trace });
            }
        };
        trace.records.last_mut().expect("trace starts non-empty").step = Some(step);
        trace.records.push(next);
        iterations = k + 1;
        let fixed = x_next == x && z_next == z;
        x = x_next;
        z = z_next;
        if fixed {
            stop = StopReason::FixedPoint;
            break;
        }
        if step.step <= config.tol {
            stop = StopReason::TolReached;
            break;
        }
    }
    trace.stop = Some(stop);
    let audit = audit_trace(&trace).map_err(RunError::Invalid)?;
    Ok(RunResult {
        x,
        z,
        iterations,
        stop,
        trace,
        audit,
    })
}

/// Sampled weak-Pareto check at the final point of a trace that stopped at an
/// exact fixed point (radius `1e-2`, 5000 samples).
pub fn fixed_point_weak_pareto(trace: &IterationTrace, problem: &MultiObjectiveProblem, seed: u64) -> Result<ParetoVerdict> {
    if trace.stop != Some(StopReason::FixedPoint) {
        return Err(Error::input("trace did not stop at a fixed point"));
    }
    let last = trace.last().ok_or_else(|| Error::input("empty trace"))?;
    problem.weak_pareto_local_check(&last.x, 1e-2, 5000, seed)
}
