//! The basic sample container and preprocessing.
//!
//! A [`TimeSeries`] is a named, uniformly sampled sequence of finite values.
//! Validation happens once at construction; estimators can then assume
//! finite data of length at least two. All variances in this crate use the
//! unbiased sample convention (divisor `n - 1`).

use crate::error::{CausalityError, Result};

/// A named, uniformly sampled, finite-valued series.
///
/// Invariants enforced at construction and preserved by every operation in
/// this crate: at least two observations, every value finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, rejecting fewer than two observations and any
    /// non-finite value.
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.len() < 2 {
            return Err(CausalityError::TooShort {
                needed: 2,
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(CausalityError::NonFinite { name, index });
        }
        Ok(Self { name, values })
    }

    /// The series name (column label in reports).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The observations, oldest first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction requires at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance (divisor `n - 1`).
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
            / (self.values.len() - 1) as f64
    }
}

/// Centers and rescales a series to zero mean and unit sample standard
/// deviation (divisor `n - 1`).
///
/// Errors with [`CausalityError::ConstantSeries`] when the sample variance is
/// zero, since the rescale would divide by zero.
pub fn standardize(x: &TimeSeries) -> Result<TimeSeries> {
    let var = x.variance();
    if var == 0.0 {
        return Err(CausalityError::ConstantSeries {
            name: x.name().to_string(),
        });
    }
    let mean = x.mean();
    let sd = var.sqrt();
    let values = x.values().iter().map(|v| (v - mean) / sd).collect();
    Ok(TimeSeries {
        name: x.name().to_string(),
        values,
    })
}
