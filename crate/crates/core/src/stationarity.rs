//! A coarse segment-drift diagnostic for covariance stationarity.
//!
//! The regression-based causality test assumes weakly stationary inputs.
//! This check splits a series into contiguous segments and compares segment
//! means (in pooled within-segment standard-deviation units) and segment
//! variances. It is a heuristic screen meant to catch trends and variance
//! explosions, not a formal unit-root test; callers treat a failure as a
//! warning, never as proof of non-stationarity.

use crate::error::{CausalityError, Result};
use crate::series::TimeSeries;

/// Default number of segments for the drift diagnostic.
pub const DEFAULT_SEGMENTS: usize = 4;
/// Default tolerance for mean drift, in pooled-sigma units.
pub const DEFAULT_MEAN_TOL: f64 = 0.5;
/// Default tolerance for the max/min segment variance ratio.
pub const DEFAULT_VAR_TOL: f64 = 2.0;

/// Outcome of the segment-drift diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    /// Number of contiguous segments examined.
    pub n_segments: usize,
    /// Per-segment sample means.
    pub segment_means: Vec<f64>,
    /// Per-segment unbiased sample variances.
    pub segment_variances: Vec<f64>,
    /// Spread of segment means (max minus min) divided by the pooled
    /// within-segment standard deviation. Infinite when segments are
    /// internally constant but their means differ.
    pub max_mean_drift: f64,
    /// Largest segment variance divided by the smallest. Infinite marks the
    /// degenerate case of a zero-variance segment.
    pub max_variance_ratio: f64,
    /// True when both drift and variance ratio are within tolerance.
    pub passed: bool,
}

/// Runs the segment-drift diagnostic with explicit tolerances.
///
/// The series is cut into `n_segments` equal blocks (any remainder joins the
/// last block). Requires `n_segments >= 2` and at least two observations per
/// segment.
pub fn stationarity_check(
    x: &TimeSeries,
    n_segments: usize,
    mean_tol: f64,
    var_tol: f64,
) -> Result<StationarityReport> {
    if n_segments < 2 {
        return Err(CausalityError::BadParameter(format!(
            "n_segments must be >= 2, got {n_segments}"
        )));
    }
    // NaN tolerances must fail too, so the comparisons are phrased to be
    // true for NaN.
    if mean_tol.is_nan() || mean_tol <= 0.0 || var_tol.is_nan() || var_tol < 1.0 {
        return Err(CausalityError::BadParameter(format!(
            "tolerances out of range: mean_tol {mean_tol} (must be > 0), \
             var_tol {var_tol} (must be >= 1)"
        )));
    }
    let n = x.len();
    if n < 2 * n_segments {
        return Err(CausalityError::TooShort {
            needed: 2 * n_segments,
            actual: n,
        });
    }

    let base = n / n_segments;
    let values = x.values();
    let mut segment_means = Vec::with_capacity(n_segments);
    let mut segment_variances = Vec::with_capacity(n_segments);
    for k in 0..n_segments {
        let start = k * base;
        let end = if k + 1 == n_segments { n } else { start + base };
        let seg = &values[start..end];
        let m = seg.iter().sum::<f64>() / seg.len() as f64;
        let v = seg.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (seg.len() - 1) as f64;
        segment_means.push(m);
        segment_variances.push(v);
    }

    let pooled_sd =
        (segment_variances.iter().sum::<f64>() / n_segments as f64).sqrt();
    let mean_spread = segment_means.iter().cloned().fold(f64::MIN, f64::max)
        - segment_means.iter().cloned().fold(f64::MAX, f64::min);
    let max_mean_drift = if pooled_sd > 0.0 {
        mean_spread / pooled_sd
    } else if mean_spread == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };

    let max_var = segment_variances.iter().cloned().fold(f64::MIN, f64::max);
    let min_var = segment_variances.iter().cloned().fold(f64::MAX, f64::min);
    let max_variance_ratio = if min_var > 0.0 {
        max_var / min_var
    } else {
        // A zero-variance segment makes the ratio undefined; report it as
        // infinite so the check fails loudly instead of passing by accident.
        f64::INFINITY
    };

    let passed = max_mean_drift <= mean_tol && max_variance_ratio <= var_tol;
    Ok(StationarityReport {
        n_segments,
        segment_means,
        segment_variances,
        max_mean_drift,
        max_variance_ratio,
        passed,
    })
}

/// [`stationarity_check`] with the default segment count and tolerances.
pub fn stationarity_check_default(x: &TimeSeries) -> Result<StationarityReport> {
    stationarity_check(x, DEFAULT_SEGMENTS, DEFAULT_MEAN_TOL, DEFAULT_VAR_TOL)
}
