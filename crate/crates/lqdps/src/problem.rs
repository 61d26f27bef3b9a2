//! Multi-objective problems `min F(x)`, sublevel sets
//! `Omega = {x : F(x) <= F(x_ref)}`, and Pareto-set oracles.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{check_len, Error, Result};
use crate::math::{dist_inf, norm2};

/// Per-coordinate closed bounds, possibly infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Bounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_len(lo.len(), &hi)?;
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if l.is_nan() || h.is_nan() || l > h {
                return Err(Error::input(alloc::format!("bounds for coordinate {i} are inverted: [{l}, {h}]")));
            }
        }
        Ok(Bounds { lo, hi })
    }

    pub fn unbounded(n: usize) -> Self {
        Bounds {
            lo: alloc::vec![f64::NEG_INFINITY; n],
            hi: alloc::vec![f64::INFINITY; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn width(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().enumerate().all(|(i, v)| self.lo[i] <= *v && *v <= self.hi[i])
    }

    pub fn clip_coord(&self, i: usize, v: f64) -> f64 {
        v.max(self.lo[i]).min(self.hi[i])
    }

    pub fn clip(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = self.clip_coord(i, *v);
        }
    }

    fn check_inside(&self, x: &[f64]) -> Result<()> {
        for (i, &v) in x.iter().enumerate() {
            if !(self.lo[i] <= v && v <= self.hi[i]) {
                return Err(Error::OutOfBox {
                    index: i,
                    value: v,
                    lo: self.lo[i],
                    hi: self.hi[i],
                });
            }
        }
        Ok(())
    }
}

/// How [`MultiObjectiveProblem::evaluate`] treats points outside the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPolicy {
    /// Reject points outside the box.
    Strict,
    /// Project onto the box before evaluating.
    ClipToBox,
}

/// Something that can measure the sup-norm distance from a point to a
/// Pareto set.
pub trait ParetoSetModel: Send + Sync {
    fn distance_inf(&self, x: &[f64]) -> f64;
}

type DistanceFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// A Pareto set described by a parameter box and a distance from `x` to the
/// slice of the set at parameter `theta`. The infimum over `theta` is found by
/// a uniform grid followed by local refinement passes around the incumbent.
pub struct ParamGridSet {
    params: Vec<(f64, f64)>,
    distance: Box<DistanceFn>,
    grid: usize,
    passes: usize,
    factor: usize,
}

impl ParamGridSet {
    /// Default grid: `10^4` intervals per parameter, two refinement passes each
    /// ten times finer.
    pub const DEFAULT_GRID: usize = 10_000;

    /// The set `{ map(theta) : theta in params }`.
    pub fn from_map<F>(params: Vec<(f64, f64)>, map: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::from_slice_distance(params, move |theta, x| dist_inf(x, &map(theta)))
    }

    /// `distance(theta, x)` must return the sup-norm distance from `x` to the
    /// part of the set attached to `theta`.
    pub fn from_slice_distance<F>(params: Vec<(f64, f64)>, distance: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        ParamGridSet {
            params,
            distance: Box::new(distance),
            grid: Self::DEFAULT_GRID,
            passes: 2,
            factor: 10,
        }
    }

    pub fn with_grid(mut self, grid: usize, passes: usize) -> Self {
        self.grid = grid.max(1);
        self.passes = passes;
        self
    }

    /// Minimizes over the tensor grid `lo[i] + j * h[i]`, `j = 0..=count`,
    /// clipped to the parameter box.
    fn scan(&self, x: &[f64], lo: &[f64], h: &[f64], count: usize, best: &mut (f64, Vec<f64>)) {
        let d = self.params.len();
        let mut idx = alloc::vec![0usize; d];
        let mut theta = alloc::vec![0.0; d];
        loop {
            for k in 0..d {
                let (pl, ph) = self.params[k];
                theta[k] = (lo[k] + idx[k] as f64 * h[k]).max(pl).min(ph);
            }
            let v = (self.distance)(&theta, x);
            if v < best.0 {
                *best = (v, theta.clone());
            }
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                idx[k] += 1;
                if idx[k] <= count {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

impl ParetoSetModel for ParamGridSet {
    fn distance_inf(&self, x: &[f64]) -> f64 {
        let lo: Vec<f64> = self.params.iter().map(|p| p.0).collect();
        let mut h: Vec<f64> = self.params.iter().map(|p| (p.1 - p.0) / self.grid as f64).collect();
        let mut best = (f64::INFINITY, lo.clone());
        self.scan(x, &lo, &h, self.grid, &mut best);
        for _ in 0..self.passes {
            let center = best.1.clone();
            let start: Vec<f64> = center.iter().zip(&h).map(|(c, s)| c - s).collect();
            h.iter_mut().for_each(|s| *s /= self.factor as f64);
            self.scan(x, &start, &h, 2 * self.factor, &mut best);
        }
        best.0
    }
}

impl fmt::Debug for ParamGridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamGridSet")
            .field("params", &self.params)
            .field("grid", &self.grid)
            .field("passes", &self.passes)
            .finish_non_exhaustive()
    }
}

type ObjectiveFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// `min F(x)` with `F : R^n -> R^m`, restricted to a box.
pub struct MultiObjectiveProblem {
    name: String,
    m: usize,
    bounds: Bounds,
    objective: Box<ObjectiveFn>,
    coercive_index: Option<usize>,
    pareto_set: Option<Box<dyn ParetoSetModel>>,
}

impl fmt::Debug for MultiObjectiveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiObjectiveProblem")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("m", &self.m)
            .field("bounds", &self.bounds)
            .field("coercive_index", &self.coercive_index)
            .field("has_pareto_set", &self.pareto_set.is_some())
            .finish()
    }
}

/// Anchor of a sublevel set `{x : F(x) <= F(x_ref)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelRef {
    x_ref: Vec<f64>,
    f_ref: Vec<f64>,
}

impl SublevelRef {
    pub fn x_ref(&self) -> &[f64] {
        &self.x_ref
    }

    pub fn f_ref(&self) -> &[f64] {
        &self.f_ref
    }

    /// `max_i max(0, F_i - F_ref_i)` for precomputed objective values.
    pub fn violation_of(&self, f_values: &[f64]) -> f64 {
        f_values
            .iter()
            .zip(&self.f_ref)
            .fold(0.0, |acc, (v, r)| acc.max(v - r))
    }
}

/// Result of the sampled weak-Pareto necessary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoVerdict {
    pub is_weak_pareto_candidate: bool,
    /// A point strictly better in every objective, present iff the verdict is
    /// negative.
    pub witness: Option<Vec<f64>>,
}

impl MultiObjectiveProblem {
    pub fn new<F>(name: impl Into<String>, m: usize, bounds: Bounds, objective: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if m == 0 || bounds.dim() == 0 {
            return Err(Error::input("problem needs at least one variable and one objective"));
        }
        Ok(MultiObjectiveProblem {
            name: name.into(),
            m,
            bounds,
            objective: Box::new(objective),
            coercive_index: None,
            pareto_set: None,
        })
    }

    /// Records that `F_r` is claimed coercive. Metadata only.
    pub fn with_coercive_index(mut self, r: usize) -> Result<Self> {
        if r >= self.m {
            return Err(Error::input("coercive index out of range"));
        }
        self.coercive_index = Some(r);
        Ok(self)
    }

    pub fn with_pareto_set(mut self, model: impl ParetoSetModel + 'static) -> Self {
        self.pareto_set = Some(Box::new(model));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn objectives(&self) -> usize {
        self.m
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn coercive_index(&self) -> Option<usize> {
        self.coercive_index
    }

    pub fn has_pareto_set(&self) -> bool {
        self.pareto_set.is_some()
    }

    pub fn evaluate(&self, x: &[f64], policy: EvalPolicy) -> Result<Vec<f64>> {
        check_len(self.dim(), x)?;
        let values = match policy {
            EvalPolicy::Strict => {
                self.bounds.check_inside(x)?;
                (self.objective)(x)
            }
            EvalPolicy::ClipToBox => {
                let mut clipped = x.to_vec();
                self.bounds.clip(&mut clipped);
                (self.objective)(&clipped)
            }
        };
        check_len(self.m, &values)?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Evaluation { index });
        }
        Ok(values)
    }

    /// Anchors `Omega` at `x_ref`.
    pub fn sublevel_ref(&self, x_ref: &[f64]) -> Result<SublevelRef> {
        let f_ref = self.evaluate(x_ref, EvalPolicy::Strict)?;
        Ok(SublevelRef {
            x_ref: x_ref.to_vec(),
            f_ref,
        })
    }

    /// `max_i max(0, F_i(x) - F_i(x_ref))`, zero iff `x` is in `Omega`.
    pub fn sublevel_violation(&self, omega: &SublevelRef, x: &[f64]) -> Result<f64> {
        check_len(self.m, omega.f_ref())?;
        let f = self.evaluate(x, EvalPolicy::Strict)?;
        Ok(omega.violation_of(&f))
    }

    /// Samples the box-clipped Euclidean ball `B(x, radius)` looking for a
    /// point that is strictly better than `x` in every objective (by more than
    /// `1e-12`). A positive verdict is a necessary condition only.
    pub fn weak_pareto_local_check(&self, x: &[f64], radius: f64, samples: usize, seed: u64) -> Result<ParetoVerdict> {
        if !(radius > 0.0) {
            return Err(Error::input("radius must be positive"));
        }
        if samples == 0 {
            return Err(Error::input("samples must be at least 1"));
        }
        let n = self.dim();
        let fx = self.evaluate(x, EvalPolicy::Strict)?;
        let mut rng = crate::seeded_rng(seed);
        let mut offset = alloc::vec![0.0; n];
        for _ in 0..samples {
            // rejection sampling from the cube keeps the draw uniform in the ball
            loop {
                offset.iter_mut().for_each(|v| *v = rng.gen_range(-radius..=radius));
                if norm2(&offset) <= radius {
                    break;
                }
            }
            let mut y: Vec<f64> = x.iter().zip(&offset).map(|(a, b)| a + b).collect();
            self.bounds.clip(&mut y);
            let fy = match self.evaluate(&y, EvalPolicy::Strict) {
                Ok(v) => v,
                Err(Error::Evaluation { .. }) => continue,
                Err(e) => return Err(e),
            };
            if fy.iter().zip(&fx).all(|(a, b)| *a < *b - 1e-12) {
                return Ok(ParetoVerdict {
                    is_weak_pareto_candidate: false,
                    witness: Some(y),
                });
            }
        }
        Ok(ParetoVerdict {
            is_weak_pareto_candidate: true,
            witness: None,
        })
    }

    /// Sup-norm distance from `x` to the Pareto set.
    pub fn pareto_set_distance(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dim(), x)?;
        match &self.pareto_set {
            Some(ps) => Ok(ps.distance_inf(x)),
            None => Err(Error::Unsupported("problem has no Pareto-set model")),
        }
    }

    /// Heuristic coercivity check of the claimed objective `F_r`: along 8
    /// random rays from the origin, `F_r` must grow from radius `1e2` to `1e3`
    /// and exceed its value at the origin. The box is ignored. Returns
    /// `Ok(false)` on any failure, including non-finite values.
    pub fn coercivity_heuristic(&self, seed: u64) -> Result<bool> {
        let r = self.coercive_index.ok_or(Error::Unsupported("no coercive objective declared"))?;
        let n = self.dim();
        let origin = alloc::vec![0.0; n];
        let base = (self.objective)(&origin)[r];
        let mut rng = crate::seeded_rng(seed);
        for _ in 0..8 {
            let mut dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let len = norm2(&dir);
            if len == 0.0 {
                continue;
            }
            dir.iter_mut().for_each(|v| *v /= len);
            let at = |t: f64| {
                let p: Vec<f64> = dir.iter().map(|d| d * t).collect();
                (self.objective)(&p)[r]
            };
            let (near, far) = (at(1e2), at(1e3));
            if !(near.is_finite() && far.is_finite() && far > near && near > base) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn parabola() -> MultiObjectiveProblem {
        MultiObjectiveProblem::new("parabola", 2, Bounds::unbounded(1), |x| vec![x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)])
            .unwrap()
            .with_coercive_index(0)
            .unwrap()
            .with_pareto_set(ParamGridSet::from_map(vec![(0.0, 1.0)], |t| vec![t[0]]))
    }

    #[test]
    fn bounds_validation_and_clipping() {
        assert!(Bounds::new(vec![1.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![0.0, 1.0]).is_err());
        let b = Bounds::new(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        let mut x = vec![1.5, -3.0];
        b.clip(&mut x);
        assert_eq!(x, vec![1.0, -1.0]);
        assert!(b.contains(&x));
    }

    #[test]
    fn strict_and_clipped_evaluation() {
        let b = Bounds::new(vec![0.0], vec![1.0]).unwrap();
        let p = MultiObjectiveProblem::new("sqrt", 1, b, |x| vec![libm::sqrt(x[0])]).unwrap();
        assert!(matches!(p.evaluate(&[-0.5], EvalPolicy::Strict), Err(Error::OutOfBox { index: 0, .. })));
        assert_eq!(p.evaluate(&[-0.5], EvalPolicy::ClipToBox).unwrap(), vec![0.0]);
        assert!(matches!(p.evaluate(&[0.1, 0.2], EvalPolicy::Strict), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn nan_objective_is_an_evaluation_error() {
        let p = MultiObjectiveProblem::new("nan", 1, Bounds::unbounded(1), |x| vec![libm::sqrt(x[0])]).unwrap();
        assert!(matches!(p.evaluate(&[-1.0], EvalPolicy::Strict), Err(Error::Evaluation { index: 0 })));
    }

    #[test]
    fn sublevel_violation_at_anchor_is_zero() {
        let p = parabola();
        let omega = p.sublevel_ref(&[0.3]).unwrap();
        assert_eq!(p.sublevel_violation(&omega, &[0.3]).unwrap(), 0.0);
        // x = 2 is worse in both objectives
        let v = p.sublevel_violation(&omega, &[2.0]).unwrap();
        assert!((v - (4.0 - 0.09)).abs() < 1e-12);
        // x = 0.5 improves F2 but worsens F1
        let v = p.sublevel_violation(&omega, &[0.5]).unwrap();
        assert!((v - (0.25 - 0.09)).abs() < 1e-12);
    }

    #[test]
    fn weak_pareto_check_on_parabola() {
        let p = parabola();
        let v = p.weak_pareto_local_check(&[0.5], 0.1, 500, 1).unwrap();
        assert!(v.is_weak_pareto_candidate && v.witness.is_none());
        let v = p.weak_pareto_local_check(&[1.5], 0.1, 500, 1).unwrap();
        assert!(!v.is_weak_pareto_candidate);
        let w = v.witness.unwrap();
        assert!(w[0] < 1.5);
        assert!(p.weak_pareto_local_check(&[0.5], 0.1, 0, 1).is_err());
        assert!(p.weak_pareto_local_check(&[0.5], 0.0, 10, 1).is_err());
        // a single sample near a Pareto point finds nothing
        assert!(p.weak_pareto_local_check(&[0.5], 1e-9, 1, 3).unwrap().is_weak_pareto_candidate);
    }

    #[test]
    fn pareto_distance_on_interval() {
        let p = parabola();
        assert!(p.pareto_set_distance(&[0.25]).unwrap() <= 1e-6);
        assert!((p.pareto_set_distance(&[1.75]).unwrap() - 0.75).abs() < 1e-9);
        let bare = MultiObjectiveProblem::new("bare", 1, Bounds::unbounded(1), |x| vec![x[0]]).unwrap();
        assert!(matches!(bare.pareto_set_distance(&[0.0]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn grid_set_handles_two_parameters() {
        // the unit square embedded in R^3 at height 0
        let set = ParamGridSet::from_map(vec![(0.0, 1.0), (0.0, 1.0)], |t| vec![t[0], t[1], 0.0]).with_grid(100, 2);
        assert!((set.distance_inf(&[0.3, 0.7, 0.25]) - 0.25).abs() < 1e-12);
        assert!((set.distance_inf(&[1.5, 0.5, 0.0]) - 0.5).abs() < 1e-12);
        // 100 intervals refined twice by 10 resolve to 1e-4
        assert!(set.distance_inf(&[0.123456, 0.654321, 0.0]) <= 1e-4);
    }

    #[test]
    fn coercivity_heuristic() {
        assert!(parabola().coercivity_heuristic(4).unwrap());
        let flat = MultiObjectiveProblem::new("flat", 1, Bounds::unbounded(2), |x| vec![x[0] * 0.0])
            .unwrap()
            .with_coercive_index(0)
            .unwrap();
        assert!(!flat.coercivity_heuristic(4).unwrap());
        assert!(MultiObjectiveProblem::new("p", 1, Bounds::unbounded(1), |x| vec![x[0]])
            .unwrap()
            .with_coercive_index(1)
            .is_err());
    }
}
