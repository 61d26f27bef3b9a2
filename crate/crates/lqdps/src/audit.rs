//! Shared report type for the sampling audits.
//!
//! Every module exposes its own audits (`quasi_metric::axiom_audit`,
//! `scalarization::scalar_rep_audit`, ...). They draw from
//! [`crate::seeded_rng`], so a given seed always reproduces the same report.

use core::fmt;

/// Outcome of a sampling audit.
///
/// `worst_margin` is the smallest observed slack of the audited inequality
/// (negative when the inequality is violated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    pub checks: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

impl AuditReport {
    pub fn new() -> Self {
        AuditReport {
            checks: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }

    /// Records one check whose slack is `margin`; the check fails when the
    /// slack is below `-tolerance`.
    pub fn record(&mut self, margin: f64, tolerance: f64) {
        self.checks += 1;
        if margin.is_nan() || margin < -tolerance {
            self.violations += 1;
        }
        if margin.is_nan() {
            self.worst_margin = f64::NAN;
        } else if !self.worst_margin.is_nan() {
            self.worst_margin = self.worst_margin.min(margin);
        }
    }

    /// Records a check that must hold strictly (`margin > 0`).
    pub fn record_strict(&mut self, margin: f64) {
        self.checks += 1;
        if !(margin > 0.0) {
            self.violations += 1;
        }
        if !self.worst_margin.is_nan() {
            self.worst_margin = self.worst_margin.min(margin);
        }
    }

    pub fn merge(&mut self, other: &AuditReport) {
        self.checks += other.checks;
        self.violations += other.violations;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checks > 0
    }
}

impl Default for AuditReport {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} checks, {} violations, worst margin {:e}",
            self.checks, self.violations, self.worst_margin
        )
    }
}
