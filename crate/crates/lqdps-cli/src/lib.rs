//! Runner, file formats and command-line front end for the LQDPS solver.

pub mod cli;
pub mod config;
pub mod props;
pub mod table;
pub mod trace_io;

use lqdps::solver::AuditSummary;

/// Largest sublevel violation accepted by [`trace_checks`].
pub const SUBLEVEL_TOL: f64 = 1e-6;

/// One named pass/fail line of a trace audit.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

/// The checks a completed trace must satisfy.
pub fn trace_checks(a: &AuditSummary) -> Vec<Check> {
    vec![
        Check {
            name: "descent",
            ok: a.monotonicity_violations == 0,
            detail: format!("{} violations, worst increase {:e}", a.monotonicity_violations, a.worst_increase),
        },
        Check {
            name: "feasibility",
            ok: a.max_sublevel_violation <= SUBLEVEL_TOL,
            detail: format!("max sublevel violation {:e}", a.max_sublevel_violation),
        },
        Check {
            name: "q2 partial sums",
            ok: a.partial_sums_nondecreasing(),
            detail: format!("total {:e}, last term {:e}", a.q2_total(), a.q2_last),
        },
        Check {
            name: "z residual",
            ok: a.max_z_residual.is_finite(),
            detail: format!("max {:e}", a.max_z_residual),
        },
        Check {
            name: "descent margin",
            ok: a.min_descent_margin >= 0.0,
            detail: format!("min {:e}", a.min_descent_margin),
        },
    ]
}

pub fn format_checks(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {}: {}\n", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail))
        .collect()
}
