//! Runs every sampling audit of the core crate under one seed.

use std::fmt::Write as _;

use lqdps::benchmarks::benchmark_quasi_distance;
use lqdps::quasi_metric::{axiom_audit, lipschitz_audit, norm_sandwich_audit, subgradient_audit, WeightedAsymmetric};
use lqdps::scalarization::{
    convexity_audit, gradient_check, log_regularizer_audit, scalar_rep_audit, Scalarization, ScalarizationKind,
};
use lqdps::subproblem::{solve_z_step, z_residual};
use lqdps::audit::AuditReport;
use lqdps::seeded_rng;
use rand::Rng;

pub const QD_SAMPLES: usize = 10_000;
pub const SCALAR_TRIALS: usize = 10_000;
pub const CONVEXITY_TRIALS: usize = 1_000;
pub const GRADIENT_SAMPLES: usize = 1_000;
pub const GRADIENT_STEP: f64 = 1e-6;
pub const GRADIENT_TOL: f64 = 1e-5;
pub const Z_STEP_SAMPLES: usize = 1_000;
pub const Z_ROOT_TOL: f64 = 1e-12;

/// Residual bound of the z-step optimality equation per scalarization.
pub fn z_step_tolerance(kind: ScalarizationKind) -> f64 {
    match kind {
        ScalarizationKind::SumShifted => 1e-12,
        ScalarizationKind::Exponential => 1e-11,
    }
}

/// Largest z-step residual over random `(F, z_k, beta)`.
pub fn z_step_audit(kind: ScalarizationKind, m: usize, samples: usize, seed: u64) -> lqdps::Result<f64> {
    let model = Scalarization::new(kind, m)?;
    let mut rng = seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let z_k: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..=5.0)).collect();
        let beta = rng.gen_range(0.01..=10.0);
        let z = solve_z_step(&model, &f, &z_k, beta, Z_ROOT_TOL)?;
        worst = worst.max(z_residual(&model, &f, &z, &z_k, beta)?);
    }
    Ok(worst)
}

/// A few asymmetric quasi-distances besides the benchmark one.
fn sample_family() -> Vec<(String, WeightedAsymmetric)> {
    let mut out = vec![("benchmark c+=3 c-=2".to_string(), benchmark_quasi_distance())];
    let extra = [
        (vec![1.0], vec![1.0]),
        (vec![5.0, 1.0], vec![2.0, 4.0]),
        (vec![0.1, 7.0, 2.5, 1.0], vec![3.0, 0.2, 2.5, 9.0]),
    ];
    for (cp, cm) in extra {
        let name = format!("c+={cp:?} c-={cm:?}");
        out.push((name, WeightedAsymmetric::new(cp, cm).expect("static weights are valid")));
    }
    out
}

/// Result of [`run_props`].
#[derive(Debug, Clone)]
pub struct PropsOutcome {
    pub text: String,
    pub passed: bool,
}

/// Runs all suites. The text output depends only on `seed`.
pub fn run_props(seed: u64) -> lqdps::Result<PropsOutcome> {
    let mut text = String::new();
    let mut passed = true;
    let mut line = |name: &str, ok: bool, detail: String| {
        passed &= ok;
        let _ = writeln!(text, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    };
    let report = |name: &str, r: AuditReport, line: &mut dyn FnMut(&str, bool, String)| {
        line(name, r.passed(), r.to_string());
    };

    for (i, (name, q)) in sample_family().into_iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        report(&format!("quasi-distance axioms [{name}]"), axiom_audit(&q, QD_SAMPLES, s)?, &mut line);
        report(&format!("norm sandwich [{name}]"), norm_sandwich_audit(&q, QD_SAMPLES, s)?, &mut line);
        report(&format!("lipschitz bound [{name}]"), lipschitz_audit(&q, QD_SAMPLES, s)?, &mut line);
        report(&format!("subgradient inequality [{name}]"), subgradient_audit(&q, QD_SAMPLES, s)?, &mut line);
    }

    for kind in ScalarizationKind::ALL {
        for m in [2, 3] {
            let model = Scalarization::new(kind, m)?;
            let tag = format!("{kind}, m={m}");
            report(&format!("strict scalar representation [{tag}]"), scalar_rep_audit(&model, SCALAR_TRIALS, seed)?, &mut line);
            report(&format!("positivity and convexity [{tag}]"), convexity_audit(&model, CONVEXITY_TRIALS, seed)?, &mut line);
            let err = gradient_check(&model, GRADIENT_SAMPLES, GRADIENT_STEP, seed)?;
            line(&format!("z-gradient vs finite differences [{tag}]"), err <= GRADIENT_TOL, format!("max relative error {err:e} (limit {GRADIENT_TOL:e})"));
            let res = z_step_audit(kind, m, Z_STEP_SAMPLES, seed)?;
            let tol = z_step_tolerance(kind);
            line(&format!("z-step optimality residual [{tag}]"), res <= tol, format!("max residual {res:e} (limit {tol:e})"));
        }
    }
    for m in [1, 2, 3] {
        report(&format!("log regularizer [m={m}]"), log_regularizer_audit(m, CONVEXITY_TRIALS, seed)?, &mut line);
    }

    let _ = writeln!(text, "{}", if passed { "all properties hold" } else { "property failures found" });
    Ok(PropsOutcome { text, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_step_residuals_are_tiny() {
        for kind in ScalarizationKind::ALL {
            let r = z_step_audit(kind, 2, 200, 3).unwrap();
            assert!(r <= z_step_tolerance(kind), "{kind}: {r:e}");
        }
    }
}
