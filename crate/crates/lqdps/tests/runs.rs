//! Invariants of complete benchmark runs.

use lqdps::benchmarks::{benchmark_quasi_distance, BenchmarkId};
use lqdps::quasi_metric::QuasiDistance;
use lqdps::scalarization::{Scalarization, ScalarizationKind};
use lqdps::solver::{run_lqdps, LqdpsConfig, RunResult, Schedule, StopReason};
use lqdps::subproblem::ProxMode;

fn run(id: BenchmarkId, kind: ScalarizationKind, mu: Schedule, beta: Schedule, tol: f64) -> RunResult {
    let model = Scalarization::new(kind, id.objectives()).unwrap();
    let config = LqdpsConfig::new(mu, beta, ProxMode::QSquared, tol);
    run_lqdps(&id.problem(), model, &benchmark_quasi_distance(), &config, &id.default_x0(), &id.default_z0()).unwrap()
}

#[test]
fn sum_shifted_z_shrinks_and_settles() {
    for id in BenchmarkId::ALL {
        let r = run(id, ScalarizationKind::SumShifted, Schedule::OnePlusInvK, Schedule::KLinear, 1e-300);
        assert_eq!(r.stop, StopReason::MaxIter);
        let zs: Vec<&Vec<f64>> = r.trace.records.iter().map(|rec| &rec.z).collect();
        for w in zs.windows(2) {
            for (a, b) in w[0].iter().zip(w[1]) {
                assert!(*b > 0.0 && b <= a);
            }
        }
        let diff = |i: usize| zs[i].iter().zip(zs[i + 1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff(zs.len() - 2) < diff(0));
    }
}

#[test]
fn iterates_stay_in_initial_sublevel_set() {
    for id in BenchmarkId::ALL {
        for kind in ScalarizationKind::ALL {
            let r = run(id, kind, Schedule::TwoMinusInvK, Schedule::InvK, 1e-4);
            let f0 = &r.trace.records[0].f_values;
            for rec in &r.trace.records {
                for (f, g) in rec.f_values.iter().zip(f0) {
                    assert!(*f <= g + 1e-5, "{id} {kind} k={}", rec.k);
                }
            }
        }
    }
}

#[test]
fn last_q2_term_is_bounded_by_tolerance() {
    let tol = 1e-2;
    let r = run(BenchmarkId::Fa, ScalarizationKind::SumShifted, Schedule::Constant(1.0), Schedule::Constant(1.0), tol);
    assert_eq!(r.stop, StopReason::TolReached);
    let beta = benchmark_quasi_distance().norm_bounds().beta;
    assert!(r.audit.q2_last <= (beta * tol).powi(2), "{}", r.audit.q2_last);
    assert!(r.audit.final_step <= tol);
}
