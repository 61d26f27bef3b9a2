//! Quasi-distances: nonnegative bifunctions satisfying identity and the
//! triangle inequality, but not symmetry.
//!
//! The only concrete family is [`WeightedAsymmetric`], where moving "up" in a
//! coordinate costs `c_plus[i]` per unit and moving "down" costs `c_minus[i]`.
//! It is sandwiched between multiples of the Euclidean norm, see
//! [`QuasiDistance::norm_bounds`].

use alloc::vec::Vec;

use rand::Rng;

use crate::audit::AuditReport;
use crate::error::{check_len, Error, Result};
use crate::math::{dist2, norm2};

/// Constants with `alpha * |x - y| <= q(x, y) <= beta * |x - y|` for the
/// Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEquivalenceBounds {
    pub alpha: f64,
    pub beta: f64,
}

/// Product of closed intervals `[lo[i], hi[i]]`, the subdifferential of a
/// coordinate-separable convex function.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgradientBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SubgradientBox {
    pub fn contains(&self, g: &[f64]) -> bool {
        g.len() == self.lo.len()
            && g.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// The element of the box maximizing `<g, d>`.
    pub fn support_point(&self, d: &[f64]) -> Vec<f64> {
        d.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(di, (lo, hi))| if *di > 0.0 { *hi } else { *lo })
            .collect()
    }
}

/// A quasi-distance on `R^n` satisfying the two-sided norm sandwich.
pub trait QuasiDistance {
    fn dim(&self) -> usize;

    /// `q(x, y)`.
    fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64>;

    /// `q(x, y)^2`.
    fn eval_sq(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let q = self.eval(x, y)?;
        Ok(q * q)
    }

    /// Subdifferential of `q(., y_ref)` at `x`.
    fn subgradient_first(&self, x: &[f64], y_ref: &[f64]) -> Result<SubgradientBox>;

    fn norm_bounds(&self) -> NormEquivalenceBounds;
}

/// `q(x, y) = sum_i max(c_plus[i] * (y_i - x_i), c_minus[i] * (x_i - y_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAsymmetric {
    c_plus: Vec<f64>,
    c_minus: Vec<f64>,
}

impl WeightedAsymmetric {
    pub fn new(c_plus: Vec<f64>, c_minus: Vec<f64>) -> Result<Self> {
        if c_plus.is_empty() {
            return Err(Error::input("quasi-distance needs at least one coordinate"));
        }
        check_len(c_plus.len(), &c_minus)?;
        for (i, c) in c_plus.iter().chain(&c_minus).enumerate() {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::NonPositive {
                    index: i % c_plus.len(),
                    value: *c,
                });
            }
        }
        Ok(WeightedAsymmetric { c_plus, c_minus })
    }

    /// Same coefficients in every coordinate.
    pub fn uniform(n: usize, c_plus: f64, c_minus: f64) -> Result<Self> {
        Self::new(alloc::vec![c_plus; n], alloc::vec![c_minus; n])
    }

    pub fn c_plus(&self) -> &[f64] {
        &self.c_plus
    }

    pub fn c_minus(&self) -> &[f64] {
        &self.c_minus
    }

    fn check(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_len(self.dim(), x)?;
        check_len(self.dim(), y)
    }
}

impl QuasiDistance for WeightedAsymmetric {
    fn dim(&self) -> usize {
        self.c_plus.len()
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(x, y)?;
        let mut q = 0.0;
        for i in 0..x.len() {
            let d = y[i] - x[i];
            q += if d > 0.0 {
                self.c_plus[i] * d
            } else {
                -self.c_minus[i] * d
            };
        }
        Ok(q)
    }

    fn subgradient_first(&self, x: &[f64], y_ref: &[f64]) -> Result<SubgradientBox> {
        self.check(x, y_ref)?;
        let n = self.dim();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let (l, h) = if x[i] < y_ref[i] {
                (-self.c_plus[i], -self.c_plus[i])
            } else if x[i] > y_ref[i] {
                (self.c_minus[i], self.c_minus[i])
            } else {
                (-self.c_plus[i], self.c_minus[i])
            };
            lo.push(l);
            hi.push(h);
        }
        Ok(SubgradientBox { lo, hi })
    }

    /// `alpha = min_i min(c+, c-)` and `beta = sqrt(n) * max_i max(c+, c-)`,
    /// through `|.|_2 <= |.|_1 <= sqrt(n) |.|_2`.
    fn norm_bounds(&self) -> NormEquivalenceBounds {
        let all = || self.c_plus.iter().chain(&self.c_minus).copied();
        let alpha = all().fold(f64::INFINITY, f64::min);
        let max = all().fold(0.0, f64::max);
        NormEquivalenceBounds {
            alpha,
            beta: libm::sqrt(self.dim() as f64) * max,
        }
    }
}

const AUDIT_HALF_WIDTH: f64 = 10.0;

fn sample_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(-AUDIT_HALF_WIDTH..=AUDIT_HALF_WIDTH))
        .collect()
}

/// Copies some coordinates of `src` into `dst` so that kinks get exercised.
fn share_coordinates(rng: &mut impl Rng, dst: &mut [f64], src: &[f64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if rng.gen_bool(0.25) {
            *d = *s;
        }
    }
}

fn rel_slack(scale: f64) -> f64 {
    1e-12 * (1.0 + scale)
}

/// Checks the identity axiom on pairs and the triangle inequality on triples
/// drawn from `[-10, 10]^n`.
pub fn axiom_audit<Q: QuasiDistance + ?Sized>(q: &Q, samples: usize, seed: u64) -> Result<AuditReport> {
    if samples == 0 {
        return Err(Error::input("sample_count must be at least 1"));
    }
    let n = q.dim();
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let x = sample_point(&mut rng, n);
        let mut y = sample_point(&mut rng, n);
        let mut z = sample_point(&mut rng, n);
        share_coordinates(&mut rng, &mut y, &x);
        share_coordinates(&mut rng, &mut z, &y);

        // q(x, x) = 0 exactly
        let qxx = q.eval(&x, &x)?;
        report.record(-qxx.abs(), 0.0);
        // q(x, y) > 0 whenever x != y
        if x != y {
            report.record_strict(q.eval(&x, &y)?);
        }
        let lhs = q.eval(&x, &z)?;
        let rhs = q.eval(&x, &y)? + q.eval(&y, &z)?;
        report.record(rhs - lhs, rel_slack(rhs));
    }
    Ok(report)
}

/// Checks `alpha |x - y|_2 <= q(x, y) <= beta |x - y|_2` on sampled pairs.
pub fn norm_sandwich_audit<Q: QuasiDistance + ?Sized>(q: &Q, samples: usize, seed: u64) -> Result<AuditReport> {
    let n = q.dim();
    let bounds = q.norm_bounds();
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let x = sample_point(&mut rng, n);
        let mut y = sample_point(&mut rng, n);
        share_coordinates(&mut rng, &mut y, &x);
        let d = dist2(&x, &y);
        let qv = q.eval(&x, &y)?;
        report.record(qv - bounds.alpha * d, rel_slack(qv));
        report.record(bounds.beta * d - qv, rel_slack(qv));
    }
    Ok(report)
}

/// Checks `|q(x, y) - q(x', y)| <= beta |x - x'|_2` on sampled triples.
pub fn lipschitz_audit<Q: QuasiDistance + ?Sized>(q: &Q, samples: usize, seed: u64) -> Result<AuditReport> {
    let n = q.dim();
    let beta = q.norm_bounds().beta;
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let x = sample_point(&mut rng, n);
        let x2 = sample_point(&mut rng, n);
        let y = sample_point(&mut rng, n);
        let gap = (q.eval(&x, &y)? - q.eval(&x2, &y)?).abs();
        let bound = beta * dist2(&x, &x2);
        report.record(bound - gap, rel_slack(bound));
    }
    Ok(report)
}

/// Checks the convexity inequality `q(x + t d, y) >= q(x, y) + t <g, d>` for
/// the hardest element `g` of the subgradient box, over several step lengths.
pub fn subgradient_audit<Q: QuasiDistance + ?Sized>(q: &Q, samples: usize, seed: u64) -> Result<AuditReport> {
    let n = q.dim();
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..samples {
        let y = sample_point(&mut rng, n);
        let mut x = sample_point(&mut rng, n);
        share_coordinates(&mut rng, &mut x, &y);
        let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let len = norm2(&d);
        if len == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|v| *v /= len);
        let sub = q.subgradient_first(&x, &y)?;
        let g = sub.support_point(&d);
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let base = q.eval(&x, &y)?;
        for t in [1e-6, 1e-4, 1e-2, 1.0] {
            let moved: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            let lhs = q.eval(&moved, &y)?;
            report.record(lhs - (base + t * slope), rel_slack(lhs.max(base)));
        }
    }
    Ok(report)
}
