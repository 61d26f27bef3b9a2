//! Logarithmic quasi-distance proximal point scalarization for unconstrained
//! multi-objective minimization.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`quasi_metric`]: asymmetric quasi-distances and their first-argument
//!   subgradients.
//! - [`scalarization`]: scalar representations `f(x, z)` of the objective map
//!   and the logarithmic regularizer in `z`.
//! - [`problem`]: objective maps, sublevel sets and Pareto-set oracles.
//! - [`benchmarks`]: the three box-constrained test problems `fa`, `fb`, `fc`.
//! - [`subproblem`]: one proximal step, solved by alternating an exact
//!   `z`-update with a compass search in `x`.
//! - [`solver`]: the outer loop, parameter schedules and trace audits.
//!
//! IO, configuration files and the command-line tool live in the `lqdps`
//! crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod audit;
pub mod benchmarks;
mod error;
mod math;
pub mod problem;
pub mod quasi_metric;
pub mod scalarization;
pub mod solver;
pub mod subproblem;

pub use error::{Error, Result};

/// Deterministic generator used by every sampling audit.
pub type AuditRng = rand_chacha::ChaCha8Rng;

/// Builds the audit generator for `seed`.
pub fn seeded_rng(seed: u64) -> AuditRng {
    use rand::SeedableRng;
    AuditRng::seed_from_u64(seed)
}
