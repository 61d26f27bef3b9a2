use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("component {index} must be positive, found {value}")]
    NonPositive { index: usize, value: f64 },

    #[error("coordinate {index} = {value} lies outside [{lo}, {hi}]")]
    OutOfBox {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("objective evaluation produced a non-finite value at component {index}")]
    Evaluation { index: usize },

    #[error("exponential scalarization saturates: z + F = {exponent} at component {index}")]
    Saturation { index: usize, exponent: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}

pub(crate) fn check_len(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}
