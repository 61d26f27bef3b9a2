//! Box-constrained test problems with analytic Pareto sets.
//!
//! | id   | m | box                         | Pareto set                                      |
//! |------|---|-----------------------------|-------------------------------------------------|
//! | `fa` | 2 | `[0,1]^3`                   | `x2 = sqrt(x1)`, `x3 = x1^2`                    |
//! | `fb` | 2 | `[0,1] x [-1,1]^2`          | `x2 = 0.8 x1 sin(6 pi x1 + 2pi/3)`, `x3 = 0.8 x1 cos((6 pi x1 + pi)/3)` |
//! | `fc` | 3 | `[0,1]^2 x [-2,2]`          | `x3 = 2 x2 sin(2 pi x1 + pi)`                   |

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::problem::{Bounds, EvalPolicy, MultiObjectiveProblem, ParamGridSet};
use crate::quasi_metric::WeightedAsymmetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkId {
    Fa,
    Fb,
    Fc,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 3] = [BenchmarkId::Fa, BenchmarkId::Fb, BenchmarkId::Fc];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkId::Fa => "fa",
            BenchmarkId::Fb => "fb",
            BenchmarkId::Fc => "fc",
        }
    }

    /// Table example number: 1 for `fa`, 2 for `fb`, 3 for `fc`.
    pub fn from_example(example: u32) -> Result<Self> {
        match example {
            1 => Ok(BenchmarkId::Fa),
            2 => Ok(BenchmarkId::Fb),
            3 => Ok(BenchmarkId::Fc),
            _ => Err(Error::input(alloc::format!("unknown example {example}, expected 1, 2 or 3"))),
        }
    }

    pub fn objectives(self) -> usize {
        match self {
            BenchmarkId::Fa | BenchmarkId::Fb => 2,
            BenchmarkId::Fc => 3,
        }
    }

    pub fn bounds(self) -> Bounds {
        let (lo, hi) = match self {
            BenchmarkId::Fa => (vec![0.0; 3], vec![1.0; 3]),
            BenchmarkId::Fb => (vec![0.0, -1.0, -1.0], vec![1.0, 1.0, 1.0]),
            BenchmarkId::Fc => (vec![0.0, 0.0, -2.0], vec![1.0, 1.0, 2.0]),
        };
        Bounds::new(lo, hi).expect("static bounds are valid")
    }

    /// Raw objective map, no box check.
    pub fn objective(self, x: &[f64]) -> Vec<f64> {
        match self {
            BenchmarkId::Fa => fa(x),
            BenchmarkId::Fb => fb(x),
            BenchmarkId::Fc => fc(x),
        }
    }

    pub fn problem(self) -> MultiObjectiveProblem {
        let base = MultiObjectiveProblem::new(self.as_str(), self.objectives(), self.bounds(), move |x: &[f64]| {
            self.objective(x)
        })
        .expect("benchmark dimensions are valid");
        match self {
            BenchmarkId::Fa => base.with_pareto_set(ParamGridSet::from_map(vec![(0.0, 1.0)], |t| fa_pareto_point(t[0]))),
            BenchmarkId::Fb => base.with_pareto_set(ParamGridSet::from_map(vec![(0.0, 1.0)], |t| fb_pareto_point(t[0]))),
            BenchmarkId::Fc => base.with_pareto_set(ParamGridSet::from_slice_distance(vec![(0.0, 1.0)], fc_slice_distance)),
        }
    }

    /// `x0 = (0.5, 0.5, 0.5)`.
    pub fn default_x0(self) -> Vec<f64> {
        vec![0.5; 3]
    }

    /// `z0 = (1, ..., 1)`.
    pub fn default_z0(self) -> Vec<f64> {
        vec![1.0; self.objectives()]
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fa" => Ok(BenchmarkId::Fa),
            "fb" => Ok(BenchmarkId::Fb),
            "fc" => Ok(BenchmarkId::Fc),
            other => Err(Error::input(alloc::format!("unknown problem `{other}`"))),
        }
    }
}

/// The quasi-distance used by every benchmark: `c+ = 3`, `c- = 2` in all
/// three coordinates.
pub fn benchmark_quasi_distance() -> WeightedAsymmetric {
    WeightedAsymmetric::uniform(3, 3.0, 2.0).expect("positive constants")
}

/// `F(x)` for a benchmark, rejecting points outside its box.
pub fn benchmark_eval(id: BenchmarkId, x: &[f64]) -> Result<Vec<f64>> {
    id.problem().evaluate(x, EvalPolicy::Strict)
}

/// Sup-norm distance to the benchmark's Pareto set.
pub fn ps_distance(id: BenchmarkId, x: &[f64]) -> Result<f64> {
    id.problem().pareto_set_distance(x)
}

fn sq(v: f64) -> f64 {
    v * v
}

fn fa(x: &[f64]) -> Vec<f64> {
    let r = libm::sqrt(x[0]);
    vec![x[0] + 2.0 * sq(x[2] - x[0] * x[0]), 1.0 - r + 2.0 * sq(x[1] - r)]
}

fn fb(x: &[f64]) -> Vec<f64> {
    let x1 = x[0];
    vec![
        x1 + 2.0 * sq(x[2] - 0.8 * x1 * libm::cos((6.0 * PI * x1 + PI) / 3.0)),
        1.0 - libm::sqrt(x1) + 2.0 * sq(x[1] - 0.8 * x1 * libm::sin(6.0 * PI * x1 + 2.0 * PI / 3.0)),
    ]
}

fn fc(x: &[f64]) -> Vec<f64> {
    let (a, b) = (0.5 * x[0] * PI, 0.5 * x[1] * PI);
    vec![
        libm::cos(a) * libm::cos(b),
        libm::cos(a) * libm::sin(b),
        libm::sin(a) + 2.0 * sq(x[2] - 2.0 * x[1] * libm::sin(2.0 * PI * x[0] + PI)),
    ]
}

fn fa_pareto_point(t: f64) -> Vec<f64> {
    vec![t, libm::sqrt(t), t * t]
}

fn fb_pareto_point(t: f64) -> Vec<f64> {
    vec![
        t,
        0.8 * t * libm::sin(6.0 * PI * t + 2.0 * PI / 3.0),
        0.8 * t * libm::cos((6.0 * PI * t + PI) / 3.0),
    ]
}

/// Distance from `x` to `{(t1, t2, 2 t2 s) : t2 in [0, 1]}` with
/// `s = sin(2 pi t1 + pi)`, i.e. the fc Pareto set at fixed `t1`.
///
/// The inner problem `min_t2 max(|x2 - t2|, |x3 - 2 s t2|)` is convex and
/// piecewise linear, so its minimum sits at an endpoint, a kink or a
/// crossing of the two pieces; all candidates are evaluated.
fn fc_slice_distance(theta: &[f64], x: &[f64]) -> f64 {
    let t1 = theta[0];
    let slope = 2.0 * libm::sin(2.0 * PI * t1 + PI);
    let inner = |t2: f64| (x[1] - t2).abs().max((x[2] - slope * t2).abs());
    let mut candidates = [0.0, 1.0, x[1], f64::NAN, f64::NAN, f64::NAN];
    if slope != 0.0 {
        candidates[3] = x[2] / slope;
    }
    if slope != 1.0 {
        candidates[4] = (x[2] - x[1]) / (slope - 1.0);
    }
    if slope != -1.0 {
        candidates[5] = (x[1] + x[2]) / (1.0 + slope);
    }
    let best = candidates
        .iter()
        .filter(|c| c.is_finite())
        .map(|c| inner(c.max(0.0).min(1.0)))
        .fold(f64::INFINITY, f64::min);
    (x[0] - t1).abs().max(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fa_values() {
        assert_eq!(benchmark_eval(BenchmarkId::Fa, &[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0]);
        let v = benchmark_eval(BenchmarkId::Fa, &[0.5, 0.5, 0.5]).unwrap();
        assert_relative_eq!(v[0], 0.625, epsilon = 1e-15);
        let r = libm::sqrt(0.5);
        assert_relative_eq!(v[1], 1.0 - r + 2.0 * sq(0.5 - r), epsilon = 1e-15);
        assert_relative_eq!(v[1], 0.378_679_656_440_357_5, epsilon = 1e-12);
    }

    #[test]
    fn fb_values() {
        assert_eq!(benchmark_eval(BenchmarkId::Fb, &[0.0, 0.0, 0.0]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn fc_values() {
        let v = benchmark_eval(BenchmarkId::Fc, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
        let v = benchmark_eval(BenchmarkId::Fc, &[1.0, 0.0, 0.0]).unwrap();
        assert!(v[0].abs() < 1e-15 && v[1] == 0.0);
        assert_relative_eq!(v[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn box_is_enforced() {
        assert!(matches!(
            benchmark_eval(BenchmarkId::Fa, &[-0.1, 0.5, 0.5]),
            Err(Error::OutOfBox { index: 0, .. })
        ));
        assert!(benchmark_eval(BenchmarkId::Fb, &[0.5, -1.0, -1.0]).is_ok());
        assert!(benchmark_eval(BenchmarkId::Fc, &[0.5, 0.5, 2.5]).is_err());
    }

    #[test]
    fn ps_distance_examples() {
        assert!(ps_distance(BenchmarkId::Fa, &[0.25, 0.5, 0.0625]).unwrap() <= 1e-6);
        // the slice at theta = x1 gives 0.0375, but theta ~ 0.2746 balances the
        // x2 and x3 gaps; a 1e7-point brute-force scan gives 0.0245967
        let d = ps_distance(BenchmarkId::Fa, &[0.25, 0.5, 0.1]).unwrap();
        assert!((d - 0.024_596_7).abs() < 1e-6, "d = {d}");
        assert!(d < 0.0375);
        assert!(ps_distance(BenchmarkId::Fa, &[0.49, 0.7, 0.2401]).unwrap() <= 1e-6);
        assert!(ps_distance(BenchmarkId::Fc, &[0.5, 0.5, 0.0]).unwrap() <= 1e-6);
        let x1 = 0.3137;
        let x2 = 0.77;
        let x3 = 2.0 * x2 * libm::sin(2.0 * PI * x1 + PI);
        assert!(ps_distance(BenchmarkId::Fc, &[x1, x2, x3]).unwrap() <= 1e-6);
        let t = 0.41;
        assert!(ps_distance(BenchmarkId::Fb, &fb_pareto_point(t)).unwrap() <= 1e-6);
    }

    #[test]
    fn fc_slice_matches_brute_force() {
        // inner minimization over t2 against a fine grid
        let x = [0.2, 0.35, -0.9];
        for t1 in [0.0, 0.13, 0.2, 0.5, 0.77, 1.0] {
            let slope = 2.0 * libm::sin(2.0 * PI * t1 + PI);
            let brute = (0..=200_000)
                .map(|j| {
                    let t2 = j as f64 / 200_000.0;
                    (x[1] - t2).abs().max((x[2] - slope * t2).abs())
                })
                .fold(f64::INFINITY, f64::min);
            let expected = (x[0] - t1).abs().max(brute);
            assert!((fc_slice_distance(&[t1], &x) - expected).abs() < 2e-5, "t1 = {t1}");
        }
    }

    #[test]
    fn ids_parse() {
        for id in BenchmarkId::ALL {
            assert_eq!(id.as_str().parse::<BenchmarkId>().unwrap(), id);
        }
        assert_eq!(BenchmarkId::from_example(3).unwrap(), BenchmarkId::Fc);
        assert!(BenchmarkId::from_example(4).is_err());
    }
}
