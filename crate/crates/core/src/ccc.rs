//! Compression-complexity causality over sliding windows.
//!
//! The question asked per window: does prepending the recent past of a
//! candidate driver make the target's next few samples easier to compress
//! than the target's own past alone? Complexity is measured by iteration
//! counts of the pair-substitution compressor in [`crate::symbolic`], on a
//! joint alphabet when two streams are read together.
//!
//! Window value (driver x, target y):
//! `cc_self(dy, y_past) - cc_joint(dy, y_past, x_past)` where `dy` is the
//! target's future block. Both terms use raw iteration counts, not the
//! normalized form, and the future block is appended on *both* coordinates
//! of the joint stream. Positive values mean x's past helps compress y's
//! future. The pair score is the plain mean over windows.

use crate::error::{CausalityError, Result};
use crate::exec;
use crate::series::TimeSeries;
use crate::symbolic::{etc, etc_joint, symbolize, SymbolSequence};

/// Default past-window length (L).
pub const DEFAULT_PAST_LEN: usize = 100;
/// Default future-block length (w).
pub const DEFAULT_FUTURE_LEN: usize = 15;
/// Default window step (delta).
pub const DEFAULT_STEP: usize = 50;
/// Default symbol alphabet size (B).
pub const DEFAULT_BINS: u64 = 4;

/// Window geometry and discretization for the pair score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CccParams {
    /// Past-window length L: samples of history per window.
    pub past_len: usize,
    /// Future-block length w: samples of target future per window.
    pub future_len: usize,
    /// Step delta between consecutive window starts.
    pub step: usize,
    /// Alphabet size B used to discretize both series over their global
    /// ranges.
    pub bins: u64,
}

impl Default for CccParams {
    fn default() -> Self {
        Self {
            past_len: DEFAULT_PAST_LEN,
            future_len: DEFAULT_FUTURE_LEN,
            step: DEFAULT_STEP,
            bins: DEFAULT_BINS,
        }
    }
}

impl CccParams {
    fn validate(&self) -> Result<()> {
        if self.past_len < 2 {
            return Err(CausalityError::BadParameter(format!(
                "past window must hold at least 2 samples, got {}",
                self.past_len
            )));
        }
        if self.future_len < 1 {
            return Err(CausalityError::BadParameter(
                "future block must hold at least 1 sample".to_string(),
            ));
        }
        if self.step < 1 {
            return Err(CausalityError::BadParameter(
                "window step must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// Windowed pair score.
#[derive(Debug, Clone, PartialEq)]
pub struct CccResult {
    /// Mean of `window_values`.
    pub ccc: f64,
    /// Per-window values, window starts at `0, step, 2*step, ...`.
    pub window_values: Vec<f64>,
    /// Number of windows evaluated.
    pub n_windows: usize,
}

/// Compression gain of the target's own past: iterations to compress the
/// past with the future appended, minus iterations for the past alone.
/// Raw counts; the difference may be negative.
pub fn cc_self(dy: &SymbolSequence, y_past: &SymbolSequence) -> f64 {
    let with_future = y_past.concat(dy);
    etc(&with_future).iterations as f64 - etc(y_past).iterations as f64
}

/// Compression gain when the candidate driver's past is read jointly with
/// the target's. The future block is appended on both coordinates, matching
/// the self term's geometry.
pub fn cc_joint(dy: &SymbolSequence, y_past: &SymbolSequence, x_past: &SymbolSequence) -> Result<f64> {
    if y_past.len() != x_past.len() {
        return Err(CausalityError::LengthMismatch {
            left: y_past.len(),
            right: x_past.len(),
        });
    }
    let y_with = y_past.concat(dy);
    let x_with = x_past.concat(dy);
    let with_future = etc_joint(&y_with, &x_with)?;
    let past_only = etc_joint(y_past, x_past)?;
    Ok(with_future.iterations as f64 - past_only.iterations as f64)
}

/// Windowed compression-complexity score for the direction x -> y.
///
/// Both series are discretized once over their global ranges, then windows
/// start at `t = 0, step, 2*step, ...` while `t + past_len + future_len <= n`.
/// Each window contributes `cc_self - cc_joint`; the score is their mean.
///
/// The self term and joint term cancel exactly when x equals y, because the
/// joint code of a stream with itself relabels symbols bijectively and the
/// compressor is relabeling-invariant: `ccc_pair(y, y, p)` is exactly zero
/// in every window.
pub fn ccc_pair(x: &TimeSeries, y: &TimeSeries, params: &CccParams) -> Result<CccResult> {
    params.validate()?;
    if x.len() != y.len() {
        return Err(CausalityError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = y.len();
    let span = params.past_len + params.future_len;
    if n < span {
        return Err(CausalityError::TooShort {
            needed: span,
            actual: n,
        });
    }
    let sx = symbolize(x, params.bins)?;
    let sy = symbolize(y, params.bins)?;

    let n_windows = (n - span) / params.step + 1;
    let values: Vec<Result<f64>> = exec::map_indexed(n_windows, |i| {
        let t = i * params.step;
        let y_past = sy.window(t, params.past_len);
        let x_past = sx.window(t, params.past_len);
        let dy = sy.window(t + params.past_len, params.future_len);
        Ok(cc_self(&dy, &y_past) - cc_joint(&dy, &y_past, &x_past)?)
    });
    let window_values: Vec<f64> = values.into_iter().collect::<Result<Vec<_>>>()?;
    let ccc = window_values.iter().sum::<f64>() / n_windows as f64;
    Ok(CccResult {
        ccc,
        window_values,
        n_windows,
    })
}
