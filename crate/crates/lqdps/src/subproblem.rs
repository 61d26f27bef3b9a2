//! One proximal step: approximately minimize
//!
//! ```text
//! phi(x, z) = f(F(x), z) + beta * H(z; z_k) + (mu / 2) * q(x, x_k)^p,   p in {1, 2}
//! ```
//!
//! over `x` in `Omega_k` (intersected with the box) and `z > 0`.
//!
//! For fixed `x` the `z` part separates per component and has the exact
//! optimality condition `1 / z_i - 1 / z_k_i = h_i(x, z) / beta`, solved in
//! closed form for the sum-shifted scalarization and by a safeguarded Newton
//! iteration for the exponential one. For fixed `z` the `x` part is
//! nonsmooth, so it is handled by a compass search with a quadratic penalty on
//! the sublevel constraint.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::problem::{EvalPolicy, MultiObjectiveProblem, SublevelRef};
use crate::quasi_metric::QuasiDistance;
use crate::scalarization::{LogRegularizer, Scalarization, ScalarizationKind, EXP_SATURATION};

/// Which power of the quasi-distance regularizes `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProxMode {
    /// `(mu / 2) q^2(x, x_k)`
    QSquared,
    /// `(mu / 2) q(x, x_k)`
    QPlain,
}

impl fmt::Display for ProxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProxMode::QSquared => "q2",
            ProxMode::QPlain => "q",
        })
    }
}

impl FromStr for ProxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q2" => Ok(ProxMode::QSquared),
            "q" => Ok(ProxMode::QPlain),
            other => Err(Error::input(alloc::format!("unknown mode `{other}`, expected q2 or q"))),
        }
    }
}

/// Settings of the inner alternating solver.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolverConfig {
    /// Weight `rho` of `rho * violation^2`.
    pub penalty_weight: f64,
    /// Probes whose sublevel violation exceeds this are rejected outright.
    pub feasibility_tol: f64,
    /// Number of alternating x/z rounds.
    pub sweeps: usize,
    /// Initial compass step; `None` means `0.1 *` box width per coordinate
    /// (or `0.1` for unbounded coordinates).
    pub step0: Option<f64>,
    pub shrink: f64,
    pub min_step: f64,
    /// Target residual of the exponential z-equation.
    pub z_root_tol: f64,
    /// Cap on objective evaluations per compass search.
    pub max_evals: usize,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        InnerSolverConfig {
            penalty_weight: 1e6,
            feasibility_tol: 1e-6,
            sweeps: 8,
            step0: None,
            shrink: 0.5,
            min_step: 1e-9,
            z_root_tol: 1e-12,
            max_evals: 200_000,
        }
    }
}

impl InnerSolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("penalty_weight", self.penalty_weight),
            ("feasibility_tol", self.feasibility_tol),
            ("min_step", self.min_step),
            ("z_root_tol", self.z_root_tol),
            ("step0", self.step0.unwrap_or(1.0)),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(alloc::format!("inner.{name} must be positive, got {v}")));
            }
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::config("inner.shrink must lie in (0, 1)"));
        }
        if self.sweeps == 0 || self.max_evals == 0 {
            return Err(Error::config("inner.sweeps and inner.max_evals must be at least 1"));
        }
        Ok(())
    }
}

/// Computable stand-ins for the subgradient optimality conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityCertificate {
    /// Residual of the z optimality equation at the returned point.
    pub z_residual: f64,
    /// Smallest one-sided difference quotient of `phi(., z_next)` at `x_next`
    /// over the feasible probe directions; `+inf` when none is feasible.
    pub directional_slack: f64,
    /// `phi(x_k, z_k) - phi(x_next, z_next)`, nonnegative.
    pub descent_margin: f64,
}

/// Data of one outer iteration.
pub struct SubproblemInstance<'a, Q: QuasiDistance + ?Sized> {
    pub problem: &'a MultiObjectiveProblem,
    pub model: Scalarization,
    pub qdist: &'a Q,
    pub mode: ProxMode,
    pub mu: f64,
    pub beta: f64,
    pub x_k: Vec<f64>,
    pub omega: SublevelRef,
    regularizer: LogRegularizer,
}

impl<'a, Q: QuasiDistance + ?Sized> SubproblemInstance<'a, Q> {
    /// Builds the instance anchored at `x_k`, with `Omega_k` at `x_k`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        problem: &'a MultiObjectiveProblem,
        model: Scalarization,
        qdist: &'a Q,
        mode: ProxMode,
        mu: f64,
        beta: f64,
        x_k: &[f64],
        z_k: &[f64],
    ) -> Result<Self> {
        let omega = problem.sublevel_ref(x_k)?;
        Self::with_omega(problem, model, qdist, mode, mu, beta, x_k, z_k, omega)
    }

    /// Like [`SubproblemInstance::new`] with an explicit sublevel anchor.
    #[allow(clippy::too_many_arguments)]
    pub fn with_omega(
        problem: &'a MultiObjectiveProblem,
        model: Scalarization,
        qdist: &'a Q,
        mode: ProxMode,
        mu: f64,
        beta: f64,
        x_k: &[f64],
        z_k: &[f64],
        omega: SublevelRef,
    ) -> Result<Self> {
        if !(mu > 0.0) || !(beta > 0.0) {
            return Err(Error::input("mu and beta must be positive"));
        }
        check_len(problem.dim(), x_k)?;
        check_len(problem.dim(), omega.x_ref())?;
        check_len(problem.objectives(), z_k)?;
        if qdist.dim() != problem.dim() {
            return Err(Error::DimensionMismatch {
                expected: problem.dim(),
                found: qdist.dim(),
            });
        }
        if model.objectives() != problem.objectives() {
            return Err(Error::DimensionMismatch {
                expected: problem.objectives(),
                found: model.objectives(),
            });
        }
        if !problem.bounds().contains(x_k) {
            return Err(Error::input("x_k lies outside the box"));
        }
        Ok(SubproblemInstance {
            problem,
            model,
            qdist,
            mode,
            mu,
            beta,
            x_k: x_k.to_vec(),
            omega,
            regularizer: LogRegularizer::new(z_k.to_vec())?,
        })
    }

    pub fn z_k(&self) -> &[f64] {
        self.regularizer.reference()
    }

    /// `(mu / 2) q^p(x, x_k)`.
    fn prox_term(&self, x: &[f64]) -> Result<f64> {
        let q = self.qdist.eval(x, &self.x_k)?;
        Ok(0.5
            * self.mu
            * match self.mode {
                ProxMode::QSquared => q * q,
                ProxMode::QPlain => q,
            })
    }

    fn phi_with(&self, f_values: &[f64], x: &[f64], z: &[f64]) -> Result<f64> {
        Ok(self.model.eval(f_values, z)? + self.beta * self.regularizer.eval(z)? + self.prox_term(x)?)
    }

    /// The x-part of `phi` for fixed `z`, with the sublevel penalty.
    /// `None` for probes that are rejected outright.
    fn penalized(&self, x: &[f64], z: &[f64], config: &InnerSolverConfig) -> Option<f64> {
        let f = self.problem.evaluate(x, EvalPolicy::Strict).ok()?;
        let violation = self.omega.violation_of(&f);
        if violation > config.feasibility_tol {
            return None;
        }
        let base = self.model.eval(&f, z).ok()? + self.prox_term(x).ok()?;
        Some(base + config.penalty_weight * violation * violation)
    }
}

/// `phi_k(x, z)`.
pub fn phi_eval<Q: QuasiDistance + ?Sized>(inst: &SubproblemInstance<'_, Q>, x: &[f64], z: &[f64]) -> Result<f64> {
    let f = inst.problem.evaluate(x, EvalPolicy::Strict)?;
    inst.phi_with(&f, x, z)
}

/// Minimizer in `z` of `f(F, z) + beta * H(z; z_k)` for fixed objective
/// values.
pub fn solve_z_step(model: &Scalarization, f_values: &[f64], z_k: &[f64], beta: f64, z_root_tol: f64) -> Result<Vec<f64>> {
    check_len(model.objectives(), f_values)?;
    check_len(model.objectives(), z_k)?;
    if !(beta > 0.0) {
        return Err(Error::input("beta must be positive"));
    }
    LogRegularizer::new(z_k.to_vec())?;
    match model.kind() {
        ScalarizationKind::SumShifted => Ok(z_k.iter().map(|&zk| beta * zk / (beta + zk)).collect()),
        ScalarizationKind::Exponential => f_values
            .iter()
            .zip(z_k)
            .enumerate()
            .map(|(i, (&fi, &zk))| exp_z_root(i, fi, zk, beta, z_root_tol))
            .collect(),
    }
}

/// Root of `g(z) = exp(z + F) + beta (1 / z_k - 1 / z)` on `(0, z_k)`.
///
/// `g` is strictly increasing, positive at `z_k`, and negative at the lower
/// bracket `0.5 * beta / (exp(z_k + F) + beta / z_k)`. Newton steps are kept
/// inside the bracket; iteration stops once `|g| / beta <= tol` or the
/// bracket cannot shrink further.
fn exp_z_root(index: usize, f: f64, z_k: f64, beta: f64, tol: f64) -> Result<f64> {
    if z_k + f > EXP_SATURATION {
        return Err(Error::Saturation {
            index,
            exponent: z_k + f,
        });
    }
    let g = |z: f64| libm::exp(z + f) + beta * (1.0 / z_k - 1.0 / z);
    let mut hi = z_k;
    let mut lo = 0.5 * beta / (libm::exp(z_k + f) + beta / z_k);
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Internal(alloc::format!("z-step bracket failed at component {index}")));
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gz = g(z);
        if (gz / beta).abs() <= tol {
            return Ok(z);
        }
        if gz > 0.0 {
            hi = z;
        } else {
            lo = z;
        }
        let slope = libm::exp(z + f) + beta / (z * z);
        let newton = z - gz / slope;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if next == z || next <= lo || next >= hi {
            // bracket exhausted at machine precision
            return Ok(z);
        }
        z = next;
    }
    Ok(z)
}

/// `max_i |1 / z_i - 1 / z_k_i - h_i(F, z) / beta|`.
pub fn z_residual(model: &Scalarization, f_values: &[f64], z_next: &[f64], z_k: &[f64], beta: f64) -> Result<f64> {
    LogRegularizer::new(z_next.to_vec())?;
    LogRegularizer::new(z_k.to_vec())?;
    let h = model.partial_z(f_values, z_next)?;
    check_len(z_next.len(), z_k)?;
    Ok(z_next
        .iter()
        .zip(z_k)
        .zip(&h)
        .map(|((zn, zk), hi)| (1.0 / zn - 1.0 / zk - hi / beta).abs())
        .fold(0.0, f64::max))
}

/// Compass search on the penalized x-part of `phi` starting at `x_k`.
pub fn solve_x_step<Q: QuasiDistance + ?Sized>(
    inst: &SubproblemInstance<'_, Q>,
    z_fixed: &[f64],
    config: &InnerSolverConfig,
) -> Result<Vec<f64>> {
    compass_search(inst, z_fixed, &inst.x_k, config)
}

/// Coordinates are probed in ascending order, positive direction first; the
/// first strict improvement is taken and that coordinate's step doubles (up to
/// the box width), otherwise it shrinks. Stops when every step is below
/// `min_step` or the evaluation budget is spent. Never returns a point worse
/// than `start`.
fn compass_search<Q: QuasiDistance + ?Sized>(
    inst: &SubproblemInstance<'_, Q>,
    z: &[f64],
    start: &[f64],
    config: &InnerSolverConfig,
) -> Result<Vec<f64>> {
    let bounds = inst.problem.bounds();
    let n = start.len();
    let mut x = start.to_vec();
    let mut best = inst
        .penalized(&x, z, config)
        .ok_or_else(|| Error::input("compass search must start at a feasible point"))?;
    let cap = |i: usize| {
        let w = bounds.width(i);
        if w.is_finite() {
            w
        } else {
            f64::INFINITY
        }
    };
    let mut steps: Vec<f64> = (0..n)
        .map(|i| match config.step0 {
            Some(s) => s,
            None if bounds.width(i).is_finite() && bounds.width(i) > 0.0 => 0.1 * bounds.width(i),
            None => 0.1,
        })
        .collect();
    let mut evals = 0usize;
    let mut probe = x.clone();
    while steps.iter().any(|s| *s >= config.min_step) && evals < config.max_evals {
        for i in 0..n {
            if steps[i] < config.min_step {
                continue;
            }
            let mut improved = false;
            for dir in [1.0, -1.0] {
                let candidate = bounds.clip_coord(i, x[i] + dir * steps[i]);
                if candidate == x[i] {
                    continue;
                }
                probe[i] = candidate;
                evals += 1;
                if let Some(v) = inst.penalized(&probe, z, config) {
                    if v < best {
                        best = v;
                        x[i] = candidate;
                        improved = true;
                        break;
                    }
                }
                probe[i] = x[i];
            }
            if improved {
                steps[i] = (2.0 * steps[i]).min(cap(i));
            } else {
                steps[i] *= config.shrink;
            }
        }
    }
    Ok(x)
}

/// Smallest one-sided difference quotient of `phi(., z)` at `x` along
/// `+-e_i` and `+-(e_i +- e_j) / sqrt(2)`, over directions that stay inside
/// the box and the sublevel tolerance.
fn directional_slack<Q: QuasiDistance + ?Sized>(
    inst: &SubproblemInstance<'_, Q>,
    x: &[f64],
    z: &[f64],
    config: &InnerSolverConfig,
) -> Result<f64> {
    const T: f64 = 1e-6;
    let n = x.len();
    let base_f = inst.problem.evaluate(x, EvalPolicy::Strict)?;
    let base = inst.phi_with(&base_f, x, z)?;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut d = alloc::vec![0.0; n];
            d[i] = s;
            dirs.push(d);
        }
        for j in (i + 1)..n {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = alloc::vec![0.0; n];
                d[i] = si * core::f64::consts::FRAC_1_SQRT_2;
                d[j] = sj * core::f64::consts::FRAC_1_SQRT_2;
                dirs.push(d);
            }
        }
    }
    let mut slack = f64::INFINITY;
    for d in dirs {
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + T * b).collect();
        if !inst.problem.bounds().contains(&y) {
            continue;
        }
        let Ok(fy) = inst.problem.evaluate(&y, EvalPolicy::Strict) else {
            continue;
        };
        if inst.omega.violation_of(&fy) > config.feasibility_tol {
            continue;
        }
        slack = slack.min((inst.phi_with(&fy, &y, z)? - base) / T);
    }
    Ok(slack)
}

/// Alternates an exact z-step with a compass x-step for `config.sweeps`
/// rounds, starting with the z-step at `x_k`.
pub fn solve_subproblem<Q: QuasiDistance + ?Sized>(
    inst: &SubproblemInstance<'_, Q>,
    config: &InnerSolverConfig,
) -> Result<(Vec<f64>, Vec<f64>, StationarityCertificate)> {
    config.validate()?;
    let z_k = inst.z_k();
    let f_k = inst.problem.evaluate(&inst.x_k, EvalPolicy::Strict)?;
    let phi_start = inst.phi_with(&f_k, &inst.x_k, z_k)?;

    let mut x = inst.x_k.clone();
    let mut f = f_k;
    let mut z = solve_z_step(&inst.model, &f, z_k, inst.beta, config.z_root_tol)?;
    for _ in 0..config.sweeps {
        let x_new = compass_search(inst, &z, &x, config)?;
        if x_new == x {
            break;
        }
        x = x_new;
        f = inst.problem.evaluate(&x, EvalPolicy::Strict)?;
        z = solve_z_step(&inst.model, &f, z_k, inst.beta, config.z_root_tol)?;
    }

    let phi_end = inst.phi_with(&f, &x, &z)?;
    let certificate = StationarityCertificate {
        z_residual: z_residual(&inst.model, &f, &z, z_k, inst.beta)?,
        directional_slack: directional_slack(inst, &x, &z, config)?,
        descent_margin: phi_start - phi_end,
    };
    if certificate.descent_margin < 0.0 {
        return Err(Error::Internal(alloc::format!(
            "subproblem increased phi by {}",
            -certificate.descent_margin
        )));
    }
    Ok((x, z, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{benchmark_quasi_distance, BenchmarkId};
    use crate::problem::Bounds;
    use crate::quasi_metric::WeightedAsymmetric;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn sum(m: usize) -> Scalarization {
        Scalarization::new(ScalarizationKind::SumShifted, m).unwrap()
    }

    fn exp(m: usize) -> Scalarization {
        Scalarization::new(ScalarizationKind::Exponential, m).unwrap()
    }

    #[test]
    fn phi_at_anchor_is_f() {
        let p = BenchmarkId::Fa.problem();
        let q = benchmark_quasi_distance();
        let x = [0.5; 3];
        let inst = SubproblemInstance::new(&p, sum(2), &q, ProxMode::QSquared, 1.0, 1.0, &x, &[1.0, 1.0]).unwrap();
        let f = p.evaluate(&x, EvalPolicy::Strict).unwrap();
        assert_eq!(phi_eval(&inst, &x, &[1.0, 1.0]).unwrap(), sum(2).eval(&f, &[1.0, 1.0]).unwrap());
    }

    #[test]
    fn phi_hand_value() {
        let p = BenchmarkId::Fa.problem();
        let q = benchmark_quasi_distance();
        let x = [0.5; 3];
        let inst = SubproblemInstance::new(&p, sum(2), &q, ProxMode::QSquared, 1.0, 1.0, &x, &[1.0, 1.0]).unwrap();
        let expected = 1.0 + 1.0 / 1.375 + 1.0 / (2.0 - 0.378_679_656_440_357_5) + 2.0 * (0.5 - libm::log(0.5) - 1.0);
        assert_relative_eq!(phi_eval(&inst, &x, &[0.5, 0.5]).unwrap(), expected, epsilon = 1e-12);
        assert_relative_eq!(expected, 2.7304, epsilon = 1e-4);
    }

    #[test]
    fn plain_and_squared_regularizers() {
        // q((0,0,0), (1,1,1)) = 9 for the benchmark quasi-distance
        let b = Bounds::unbounded(3);
        let p = MultiObjectiveProblem::new("zero", 1, b, |_| vec![0.0]).unwrap();
        let q = benchmark_quasi_distance();
        let m = sum(1);
        let sq = SubproblemInstance::new(&p, m, &q, ProxMode::QSquared, 2.0, 1.0, &[1.0; 3], &[1.0]).unwrap();
        let pl = SubproblemInstance::new(&p, m, &q, ProxMode::QPlain, 2.0, 1.0, &[1.0; 3], &[1.0]).unwrap();
        let base = m.eval(&[0.0], &[1.0]).unwrap();
        assert_relative_eq!(phi_eval(&sq, &[0.0; 3], &[1.0]).unwrap() - base, 81.0);
        assert_relative_eq!(phi_eval(&pl, &[0.0; 3], &[1.0]).unwrap() - base, 9.0);
    }

    #[test]
    fn z_step_examples() {
        assert_eq!(solve_z_step(&sum(2), &[0.3, 0.1], &[1.0, 1.0], 1.0, 1e-12).unwrap(), vec![0.5, 0.5]);
        let z = solve_z_step(&sum(1), &[0.0], &[1.0], 1e6, 1e-12).unwrap();
        assert_relative_eq!(z[0], 1e6 / (1e6 + 1.0), epsilon = 1e-15);
        // 1/z = 1 + e^z, found by bisection on (1e-6, 1)
        let (mut lo, mut hi) = (1e-6_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1.0 / mid - 1.0 - libm::exp(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = solve_z_step(&exp(1), &[0.0], &[1.0], 1.0, 1e-12).unwrap();
        assert_relative_eq!(z[0], lo, epsilon = 1e-11);
        assert_relative_eq!(z[0], 0.4011, epsilon = 1e-4);
    }

    #[test]
    fn z_residual_examples() {
        let m = sum(2);
        let z = solve_z_step(&m, &[0.0, 0.0], &[0.7, 2.0], 0.3, 1e-12).unwrap();
        assert!(z_residual(&m, &[0.0, 0.0], &z, &[0.7, 2.0], 0.3).unwrap() <= 1e-15 * 10.0);
        let e = exp(2);
        let f = [0.4, -1.0];
        let z = solve_z_step(&e, &f, &[0.7, 2.0], 0.3, 1e-12).unwrap();
        assert!(z_residual(&e, &f, &z, &[0.7, 2.0], 0.3).unwrap() <= 1e-11);
        // z = z_k leaves the full h / beta
        let r = z_residual(&e, &f, &[0.7, 2.0], &[0.7, 2.0], 0.3).unwrap();
        assert_relative_eq!(r, libm::exp(1.1) / 0.3, epsilon = 1e-12);
        assert!(z_residual(&e, &f, &[0.0, 1.0], &[0.7, 2.0], 0.3).is_err());
    }

    fn one_d() -> MultiObjectiveProblem {
        MultiObjectiveProblem::new("x^2", 1, Bounds::new(vec![-1.0], vec![1.0]).unwrap(), |x| vec![x[0] * x[0]]).unwrap()
    }

    #[test]
    fn x_step_on_one_dimensional_instance() {
        let p = one_d();
        let q = WeightedAsymmetric::uniform(1, 1.0, 1.0).unwrap();
        let inst = SubproblemInstance::new(&p, sum(1), &q, ProxMode::QSquared, 1.0, 1.0, &[0.5], &[1.0]).unwrap();
        let cfg = InnerSolverConfig::default();
        let x = solve_x_step(&inst, &[1.0], &cfg).unwrap();
        let psi = |v: f64| crate::scalarization::h_scalar(v * v) + 0.5 * (v - 0.5) * (v - 0.5);
        assert!(psi(x[0]) <= psi(0.5));
        assert!(p.sublevel_violation(&inst.omega, &x).unwrap() <= 1e-6);
        // stationary point of h(x^2) + (x - 0.5)^2 / 2 near 0.321
        assert!((x[0] - 0.321).abs() < 5e-3, "x = {}", x[0]);
    }

    #[test]
    fn penalty_rejects_infeasible_probe() {
        let p = one_d();
        let q = WeightedAsymmetric::uniform(1, 1.0, 1.0).unwrap();
        let inst = SubproblemInstance::new(&p, sum(1), &q, ProxMode::QSquared, 1.0, 1.0, &[0.5], &[1.0]).unwrap();
        let tight = InnerSolverConfig {
            feasibility_tol: 1.0,
            ..InnerSolverConfig::default()
        };
        // F(x) - F_ref = 0.1 at x = sqrt(0.35)
        let x = libm::sqrt(0.35);
        let with = inst.penalized(&[x], &[1.0], &tight).unwrap();
        let without = sum(1).eval(&[0.35], &[1.0]).unwrap() + inst.prox_term(&[x]).unwrap();
        assert_relative_eq!(with - without, 1e4, epsilon = 1e-6);
        assert!(inst.penalized(&[x], &[1.0], &InnerSolverConfig::default()).is_none());
    }

    #[test]
    fn huge_mu_freezes_x() {
        let p = BenchmarkId::Fa.problem();
        let q = benchmark_quasi_distance();
        let x = [0.5; 3];
        let cfg = InnerSolverConfig::default();
        let inst = SubproblemInstance::new(&p, sum(2), &q, ProxMode::QSquared, 1e12, 1.0, &x, &[1.0, 1.0]).unwrap();
        let (xn, zn, cert) = solve_subproblem(&inst, &cfg).unwrap();
        assert!(crate::math::dist_inf(&xn, &x) <= cfg.min_step);
        let zs = solve_z_step(&sum(2), &p.evaluate(&x, EvalPolicy::Strict).unwrap(), &[1.0, 1.0], 1.0, 1e-12).unwrap();
        assert_eq!(zn, zs);
        assert!(cert.descent_margin >= 0.0);
    }

    #[test]
    fn subproblem_certificate_on_benchmarks() {
        let q = benchmark_quasi_distance();
        let cfg = InnerSolverConfig::default();
        for id in BenchmarkId::ALL {
            let p = id.problem();
            for model in [sum(id.objectives()), exp(id.objectives())] {
                for mode in [ProxMode::QSquared, ProxMode::QPlain] {
                    let inst =
                        SubproblemInstance::new(&p, model, &q, mode, 1.0, 1.0, &id.default_x0(), &id.default_z0()).unwrap();
                    let (x, z, cert) = solve_subproblem(&inst, &cfg).unwrap();
                    assert!(cert.descent_margin >= 0.0);
                    assert!(p.bounds().contains(&x));
                    assert!(p.sublevel_violation(&inst.omega, &x).unwrap() <= 1e-6);
                    assert!(z.iter().zip(inst.z_k()).all(|(a, b)| *a > 0.0 && a < b));
                    let tol = if model.kind() == ScalarizationKind::SumShifted { 1e-12 } else { 1e-11 };
                    assert!(cert.z_residual <= tol, "{id} {:?}: {}", model.kind(), cert.z_residual);
                }
            }
        }
    }

    #[test]
    fn invalid_instances() {
        let p = BenchmarkId::Fa.problem();
        let q = benchmark_quasi_distance();
        let m = sum(2);
        assert!(SubproblemInstance::new(&p, m, &q, ProxMode::QSquared, 0.0, 1.0, &[0.5; 3], &[1.0; 2]).is_err());
        assert!(SubproblemInstance::new(&p, m, &q, ProxMode::QSquared, 1.0, 1.0, &[0.5; 3], &[1.0, 0.0]).is_err());
        assert!(SubproblemInstance::new(&p, m, &q, ProxMode::QSquared, 1.0, 1.0, &[1.5; 3], &[1.0; 2]).is_err());
        assert!(SubproblemInstance::new(&p, sum(3), &q, ProxMode::QSquared, 1.0, 1.0, &[0.5; 3], &[1.0; 2]).is_err());
        let bad = InnerSolverConfig {
            shrink: 1.0,
            ..InnerSolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mode_parses() {
        assert_eq!("q2".parse::<ProxMode>().unwrap(), ProxMode::QSquared);
        assert_eq!("q".parse::<ProxMode>().unwrap(), ProxMode::QPlain);
        assert!("q3".parse::<ProxMode>().is_err());
    }
}
