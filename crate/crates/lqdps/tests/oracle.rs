//! Inner solver against brute-force grid minimization on small convex
//! instances.

use lqdps::problem::{Bounds, EvalPolicy, MultiObjectiveProblem};
use lqdps::quasi_metric::WeightedAsymmetric;
use lqdps::scalarization::{Scalarization, ScalarizationKind};
use lqdps::subproblem::{phi_eval, solve_subproblem, solve_z_step, InnerSolverConfig, ProxMode, SubproblemInstance};

const ORACLE_TOL: f64 = 1e-3;
const FEAS_TOL: f64 = 1e-6;

/// `phi` with the exact z-step at `x`, or `None` outside the sublevel set.
fn phi_star<Q: lqdps::quasi_metric::QuasiDistance>(inst: &SubproblemInstance<'_, Q>, x: &[f64]) -> Option<f64> {
    let f = inst.problem.evaluate(x, EvalPolicy::Strict).ok()?;
    if inst.omega.violation_of(&f) > 0.0 {
        return None;
    }
    let z = solve_z_step(&inst.model, &f, inst.z_k(), inst.beta, 1e-13).ok()?;
    phi_eval(inst, x, &z).ok()
}

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> + Clone {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(move |i| lo + i as f64 * step)
}

fn check<Q: lqdps::quasi_metric::QuasiDistance>(inst: &SubproblemInstance<'_, Q>, oracle_min: f64) {
    let (x, z, cert) = solve_subproblem(inst, &InnerSolverConfig::default()).unwrap();
    let phi = phi_eval(inst, &x, &z).unwrap();
    let f = inst.problem.evaluate(&x, EvalPolicy::Strict).unwrap();
    assert!(inst.omega.violation_of(&f) <= FEAS_TOL);
    assert!(cert.descent_margin >= 0.0);
    assert!(
        (phi - oracle_min).abs() <= ORACLE_TOL,
        "solver phi {phi} vs grid {oracle_min} at x = {x:?}"
    );
}

#[test]
fn one_dimensional_instance() {
    let p = MultiObjectiveProblem::new("square", 1, Bounds::new(vec![-1.0], vec![1.0]).unwrap(), |x: &[f64]| {
        vec![x[0] * x[0]]
    })
    .unwrap();
    let q = WeightedAsymmetric::uniform(1, 1.0, 1.0).unwrap();
    for kind in ScalarizationKind::ALL {
        let model = Scalarization::new(kind, 1).unwrap();
        let inst = SubproblemInstance::new(&p, model, &q, ProxMode::QSquared, 1.0, 1.0, &[0.5], &[1.0]).unwrap();
        let best = grid(-1.0, 1.0, 1e-4)
            .filter_map(|t| phi_star(&inst, &[t]))
            .fold(f64::INFINITY, f64::min);
        check(&inst, best);
    }
}

#[test]
fn two_dimensional_instance() {
    let p = MultiObjectiveProblem::new("two bowls", 2, Bounds::new(vec![-1.0; 2], vec![1.0; 2]).unwrap(), |x: &[f64]| {
        vec![
            (x[0] - 0.2) * (x[0] - 0.2) + x[1] * x[1],
            x[0] * x[0] + (x[1] + 0.3) * (x[1] + 0.3),
        ]
    })
    .unwrap();
    let q = WeightedAsymmetric::uniform(2, 3.0, 2.0).unwrap();
    for (kind, mode) in [
        (ScalarizationKind::SumShifted, ProxMode::QSquared),
        (ScalarizationKind::Exponential, ProxMode::QSquared),
        (ScalarizationKind::SumShifted, ProxMode::QPlain),
    ] {
        let model = Scalarization::new(kind, 2).unwrap();
        let inst = SubproblemInstance::new(&p, model, &q, mode, 1.0, 1.0, &[0.5, 0.5], &[1.0, 1.0]).unwrap();
        // full box at 1e-2, then the 1e-4 grid around the coarse winner
        let mut coarse = (f64::INFINITY, [0.0; 2]);
        for a in grid(-1.0, 1.0, 1e-2) {
            for b in grid(-1.0, 1.0, 1e-2) {
                if let Some(v) = phi_star(&inst, &[a, b]) {
                    if v < coarse.0 {
                        coarse = (v, [a, b]);
                    }
                }
            }
        }
        let [ca, cb] = coarse.1;
        let mut best = coarse.0;
        for a in grid((ca - 0.02).max(-1.0), (ca + 0.02).min(1.0), 1e-4) {
            for b in grid((cb - 0.02).max(-1.0), (cb + 0.02).min(1.0), 1e-4) {
                if let Some(v) = phi_star(&inst, &[a, b]) {
                    best = best.min(v);
                }
            }
        }
        check(&inst, best);
    }
}
