//! Scalar representations `f(x, z)` of a vector objective, evaluated on the
//! precomputed objective values `F(x)`, and the logarithmic regularizer
//! `H(z) = sum_i (z_i / r_i - ln(z_i / r_i) - 1)`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::audit::AuditReport;
use crate::error::{check_len, Error, Result};

/// Smallest value treated as strictly positive.
pub const POSITIVE_FLOOR: f64 = 1e-300;

/// Largest exponent accepted by the exponential scalarization.
pub const EXP_SATURATION: f64 = 700.0;

/// `1 / (2 - t)` for `t <= 1`, `t^2` otherwise. Positive, convex, strictly
/// increasing and continuous at `t = 1`.
pub fn h_scalar(t: f64) -> f64 {
    if t <= 1.0 {
        1.0 / (2.0 - t)
    } else {
        t * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarizationKind {
    /// `f(x, z) = sum_i [z_i + h(F_i(x))]`, gradient in `z` is all ones.
    SumShifted,
    /// `f(x, z) = sum_i exp(z_i + F_i(x))`.
    Exponential,
}

impl ScalarizationKind {
    pub const ALL: [ScalarizationKind; 2] = [ScalarizationKind::SumShifted, ScalarizationKind::Exponential];

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarizationKind::SumShifted => "sum_shifted",
            ScalarizationKind::Exponential => "exponential",
        }
    }
}

impl fmt::Display for ScalarizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalarizationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sum_shifted" => Ok(ScalarizationKind::SumShifted),
            "exponential" => Ok(ScalarizationKind::Exponential),
            other => Err(Error::input(alloc::format!("unknown scalarization `{other}`"))),
        }
    }
}

/// A scalarization of `m` objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalarization {
    kind: ScalarizationKind,
    m: usize,
}

impl Scalarization {
    pub fn new(kind: ScalarizationKind, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("scalarization needs at least one objective"));
        }
        Ok(Scalarization { kind, m })
    }

    pub fn kind(&self) -> ScalarizationKind {
        self.kind
    }

    pub fn objectives(&self) -> usize {
        self.m
    }

    fn check(&self, f_values: &[f64], z: &[f64]) -> Result<()> {
        check_len(self.m, f_values)?;
        check_len(self.m, z)?;
        for (index, &value) in z.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NonPositive { index, value });
            }
        }
        Ok(())
    }

    fn exponent(index: usize, fi: f64, zi: f64) -> Result<f64> {
        let e = zi + fi;
        if e > EXP_SATURATION {
            return Err(Error::Saturation { index, exponent: e });
        }
        Ok(libm::exp(e))
    }

    /// `f` at objective values `f_values` and shift `z` (`z >= 0`).
    pub fn eval(&self, f_values: &[f64], z: &[f64]) -> Result<f64> {
        self.check(f_values, z)?;
        let mut total = 0.0;
        for (i, (&fi, &zi)) in f_values.iter().zip(z).enumerate() {
            total += match self.kind {
                ScalarizationKind::SumShifted => zi + h_scalar(fi),
                ScalarizationKind::Exponential => Self::exponent(i, fi, zi)?,
            };
        }
        Ok(total)
    }

    /// `h_i = d f / d z_i`, componentwise nonnegative.
    pub fn partial_z(&self, f_values: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.check(f_values, z)?;
        match self.kind {
            ScalarizationKind::SumShifted => Ok(alloc::vec![1.0; self.m]),
            ScalarizationKind::Exponential => f_values
                .iter()
                .zip(z)
                .enumerate()
                .map(|(i, (&fi, &zi))| Self::exponent(i, fi, zi))
                .collect(),
        }
    }
}

/// `H(z) = sum_i (z_i / r_i - ln(z_i / r_i) - 1)` around a positive reference
/// `r`. Strictly convex and nonnegative, zero only at `z = r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRegularizer {
    z_ref: Vec<f64>,
}

fn check_positive(z: &[f64]) -> Result<()> {
    for (index, &value) in z.iter().enumerate() {
        if !(value > POSITIVE_FLOOR) || !value.is_finite() {
            return Err(Error::NonPositive { index, value });
        }
    }
    Ok(())
}

impl LogRegularizer {
    pub fn new(z_ref: Vec<f64>) -> Result<Self> {
        check_positive(&z_ref)?;
        Ok(LogRegularizer { z_ref })
    }

    pub fn reference(&self) -> &[f64] {
        &self.z_ref
    }

    pub fn eval(&self, z: &[f64]) -> Result<f64> {
        check_len(self.z_ref.len(), z)?;
        check_positive(z)?;
        Ok(z.iter().zip(&self.z_ref).map(|(&zi, &ri)| log_term(zi, ri)).sum())
    }
}

/// `t - ln(1 + t)` with `t = (z - r) / r`, which stays accurate near `z = r`.
fn log_term(z: f64, r: f64) -> f64 {
    let t = (z - r) / r;
    t - libm::log1p(t)
}

fn sample_f(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-3.0..=3.0)).collect()
}

fn sample_z(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(0.0..=5.0)).collect()
}

/// Checks strict scalar representation: `F <= F'` gives `f(F, z) <= f(F', z)`,
/// strictly when `F << F'`.
pub fn scalar_rep_audit(model: &Scalarization, trials: usize, seed: u64) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    let m = model.objectives();
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for trial in 0..trials {
        let lo = sample_f(&mut rng, m);
        let z = sample_z(&mut rng, m);
        // every fourth trial shifts all components; the rest leave some equal
        let strict = trial % 4 == 0;
        let hi: Vec<f64> = lo
            .iter()
            .map(|v| {
                if strict || rng.gen_bool(0.5) {
                    v + rng.gen_range(1e-3..=2.0)
                } else {
                    *v
                }
            })
            .collect();
        let f_lo = model.eval(&lo, &z)?;
        let f_hi = model.eval(&hi, &z)?;
        if hi.iter().zip(&lo).all(|(a, b)| a > b) {
            report.record_strict(f_hi - f_lo);
        } else {
            report.record(f_hi - f_lo, 0.0);
        }
    }
    Ok(report)
}

/// Checks `f > 0` and midpoint convexity of `f` jointly in `(F, z)`.
pub fn convexity_audit(model: &Scalarization, trials: usize, seed: u64) -> Result<AuditReport> {
    let m = model.objectives();
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    for _ in 0..trials {
        let (v, z) = (sample_f(&mut rng, m), sample_z(&mut rng, m));
        let (v2, z2) = (sample_f(&mut rng, m), sample_z(&mut rng, m));
        let mid = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect() };
        let f1 = model.eval(&v, &z)?;
        let f2 = model.eval(&v2, &z2)?;
        let fm = model.eval(&mid(&v, &v2), &mid(&z, &z2))?;
        report.record_strict(f1);
        let avg = 0.5 * (f1 + f2);
        report.record(avg - fm, 1e-12 * (1.0 + avg));
    }
    Ok(report)
}

/// Largest relative error between [`Scalarization::partial_z`] and central
/// differences of [`Scalarization::eval`] with step `step`.
pub fn gradient_check(model: &Scalarization, samples: usize, step: f64, seed: u64) -> Result<f64> {
    let m = model.objectives();
    let mut rng = crate::seeded_rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        // moderate magnitudes keep central-difference round-off well below
        // the relative tolerance; z stays away from 0 so z - step is valid
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let z: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..=2.0)).collect();
        let grad = model.partial_z(&v, &z)?;
        for i in 0..m {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += step;
            zm[i] -= step;
            let fd = (model.eval(&v, &zp)? - model.eval(&v, &zm)?) / (2.0 * step);
            let err = (fd - grad[i]).abs() / grad[i].abs();
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

/// Checks `H(r) = 0`, `H(z) > 0` for `z != r`, strict growth under single
/// component perturbations, and strict midpoint convexity.
pub fn log_regularizer_audit(m: usize, trials: usize, seed: u64) -> Result<AuditReport> {
    let mut rng = crate::seeded_rng(seed);
    let mut report = AuditReport::new();
    let pos = |rng: &mut crate::AuditRng| -> Vec<f64> { (0..m).map(|_| rng.gen_range(0.05..=5.0)).collect() };
    for _ in 0..trials {
        let reg = LogRegularizer::new(pos(&mut rng))?;
        let at_ref = reg.eval(reg.reference())?;
        report.record(-at_ref.abs(), 0.0);

        let z = pos(&mut rng);
        let z2 = pos(&mut rng);
        let hz = reg.eval(&z)?;
        let hz2 = reg.eval(&z2)?;
        if z.as_slice() != reg.reference() {
            report.record_strict(hz);
        }

        let mut bumped = reg.reference().to_vec();
        let i = rng.gen_range(0..m);
        bumped[i] *= rng.gen_range(0.5..=1.5);
        if bumped.as_slice() != reg.reference() {
            report.record_strict(reg.eval(&bumped)?);
        }

        if z != z2 {
            let mid: Vec<f64> = z.iter().zip(&z2).map(|(a, b)| 0.5 * (a + b)).collect();
            report.record_strict(0.5 * (hz + hz2) - reg.eval(&mid)?);
        }
    }
    Ok(report)
}
