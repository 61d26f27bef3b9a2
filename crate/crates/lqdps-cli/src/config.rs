//! Plain-text `key = value` run configuration.
//!
//! ```text
//! # comment
//! problem = fa
//! scalarization = sum_shifted
//! mode = q2
//! mu = 1+1/k
//! beta = const:1
//! tol = 1e-3
//! x0 = 0.5, 0.5, 0.5
//! inner.sweeps = 8
//! ```
//!
//! Unset keys take the benchmark defaults. Unknown or repeated keys are
//! errors.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use lqdps::benchmarks::{benchmark_quasi_distance, BenchmarkId};
use lqdps::quasi_metric::WeightedAsymmetric;
use lqdps::scalarization::ScalarizationKind;
use lqdps::solver::{LqdpsConfig, Schedule};
use lqdps::subproblem::ProxMode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] lqdps::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax {
        line,
        message: message.into(),
    }
}

/// Everything needed for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: BenchmarkId,
    pub scalarization: ScalarizationKind,
    pub config: LqdpsConfig,
    pub x0: Vec<f64>,
    pub z0: Vec<f64>,
    pub c_plus: Vec<f64>,
    pub c_minus: Vec<f64>,
    pub seed: u64,
}

impl RunSpec {
    /// Defaults for `problem`: `mu = beta = 1`, `q2` mode, `tol = 1e-3`.
    pub fn defaults(problem: BenchmarkId) -> Self {
        let q = benchmark_quasi_distance();
        RunSpec {
            problem,
            scalarization: ScalarizationKind::SumShifted,
            config: LqdpsConfig::new(Schedule::Constant(1.0), Schedule::Constant(1.0), ProxMode::QSquared, 1e-3),
            x0: problem.default_x0(),
            z0: problem.default_z0(),
            c_plus: q.c_plus().to_vec(),
            c_minus: q.c_minus().to_vec(),
            seed: 0,
        }
    }

    pub fn quasi_distance(&self) -> lqdps::Result<WeightedAsymmetric> {
        WeightedAsymmetric::new(self.c_plus.clone(), self.c_minus.clone())
    }

    pub fn validate(&self) -> lqdps::Result<()> {
        self.config.validate()?;
        let n = self.problem.bounds().dim();
        let m = self.problem.objectives();
        if self.x0.len() != n || self.c_plus.len() != n || self.c_minus.len() != n {
            return Err(lqdps::Error::InvalidConfig(format!("x0, c_plus and c_minus need {n} entries")));
        }
        if self.z0.len() != m {
            return Err(lqdps::Error::InvalidConfig(format!("z0 needs {m} entries")));
        }
        self.quasi_distance()?;
        Ok(())
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| syntax(line, format!("{key}: cannot parse {v:?}")))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|s| parse_num(line, key, s.trim())).collect()
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(syntax(line, format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_with<T, E: std::fmt::Display>(line: usize, key: &str, r: Result<T, E>) -> Result<T, ConfigError> {
    r.map_err(|e| syntax(line, format!("{key}: {e}")))
}

/// Parses config text. The result is not validated; call
/// [`RunSpec::validate`].
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key = value, got {content:?}")))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if !seen.insert(key.clone()) {
            return Err(syntax(line, format!("duplicate key {key:?}")));
        }
        pairs.push((line, key, value));
    }

    // problem decides the defaults of everything else
    let problem = match pairs.iter().find(|(_, k, _)| k == "problem") {
        Some((line, k, v)) => parse_with(*line, k, v.parse::<BenchmarkId>())?,
        None => BenchmarkId::Fa,
    };
    let mut spec = RunSpec::defaults(problem);
    let n = problem.bounds().dim();
    let broadcast = |line: usize, key: &str, v: &str| -> Result<Vec<f64>, ConfigError> {
        let list = parse_list(line, key, v)?;
        Ok(if list.len() == 1 { vec![list[0]; n] } else { list })
    };

    for (line, key, v) in &pairs {
        let (line, v) = (*line, v.as_str());
        let cfg = &mut spec.config;
        match key.as_str() {
            "problem" => {}
            "scalarization" => spec.scalarization = parse_with(line, key, v.parse())?,
            "mode" => cfg.mode = parse_with(line, key, v.parse())?,
            "mu" => cfg.mu = parse_with(line, key, v.parse())?,
            "beta" => cfg.beta = parse_with(line, key, v.parse())?,
            "tol" => cfg.tol = parse_num(line, key, v)?,
            "max_iter" => cfg.max_iter = parse_num(line, key, v)?,
            "mu_bounds" => {
                let b = parse_list(line, key, v)?;
                if b.len() != 2 {
                    return Err(syntax(line, "mu_bounds: expected two values l, L"));
                }
                cfg.mu_bounds = Some((b[0], b[1]));
            }
            "mu_vanishing" => cfg.mu_vanishing_asserted = parse_bool(line, key, v)?,
            "x0" => spec.x0 = parse_list(line, key, v)?,
            "z0" => spec.z0 = parse_list(line, key, v)?,
            "c_plus" => spec.c_plus = broadcast(line, key, v)?,
            "c_minus" => spec.c_minus = broadcast(line, key, v)?,
            "seed" => spec.seed = parse_num(line, key, v)?,
            "inner.penalty_weight" => cfg.inner.penalty_weight = parse_num(line, key, v)?,
            "inner.feasibility_tol" => cfg.inner.feasibility_tol = parse_num(line, key, v)?,
            "inner.sweeps" => cfg.inner.sweeps = parse_num(line, key, v)?,
            "inner.step0" => cfg.inner.step0 = Some(parse_num(line, key, v)?),
            "inner.shrink" => cfg.inner.shrink = parse_num(line, key, v)?,
            "inner.min_step" => cfg.inner.min_step = parse_num(line, key, v)?,
            "inner.z_root_tol" => cfg.inner.z_root_tol = parse_num(line, key, v)?,
            "inner.max_evals" => cfg.inner.max_evals = parse_num(line, key, v)?,
            other => return Err(syntax(line, format!("unknown key {other:?}"))),
        }
    }
    Ok(spec)
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<RunSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec = parse_config(&text)?;
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config() {
        let text = "\
# example
problem = fb
scalarization = exponential
mode = q2
mu = 2-1/k
beta = k
tol = 1e-4   # tight
max_iter = 50
x0 = 0.2, 0.1, -0.3
z0 = 2, 3
c_plus = 3
c_minus = 1, 2, 2
seed = 7
inner.sweeps = 4
inner.step0 = 0.05
";
        let spec = parse_config(text).unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.problem, BenchmarkId::Fb);
        assert_eq!(spec.scalarization, ScalarizationKind::Exponential);
        assert_eq!(spec.config.mu, Schedule::TwoMinusInvK);
        assert_eq!(spec.config.beta, Schedule::KLinear);
        assert_eq!(spec.config.tol, 1e-4);
        assert_eq!(spec.config.max_iter, 50);
        assert_eq!(spec.x0, vec![0.2, 0.1, -0.3]);
        assert_eq!(spec.z0, vec![2.0, 3.0]);
        assert_eq!(spec.c_plus, vec![3.0; 3]);
        assert_eq!(spec.c_minus, vec![1.0, 2.0, 2.0]);
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.config.inner.sweeps, 4);
        assert_eq!(spec.config.inner.step0, Some(0.05));
    }

    #[test]
    fn defaults_follow_problem() {
        let spec = parse_config("problem = fc\n").unwrap();
        assert_eq!(spec.z0, vec![1.0; 3]);
        assert_eq!(spec.config.mu, Schedule::Constant(1.0));
        spec.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_config("colour = red"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(parse_config("tol = 1\ntol = 2"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(parse_config("just text").is_err());
        assert!(parse_config("mu = sometimes").is_err());
        assert!(parse_config("x0 = 1, a, 3").is_err());
        let spec = parse_config("mode = q\nmu = const:1").unwrap();
        assert!(spec.validate().is_err());
        let spec = parse_config("z0 = 1, 1, 1").unwrap();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_config(Path::new("/nonexistent/missing.cfg")).unwrap_err();
        assert!(matches!(err, ConfigError::Io { .. }));
    }
}
