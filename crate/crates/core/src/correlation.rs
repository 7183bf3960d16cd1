//! Zero-lag Pearson correlation, the symmetric baseline against which the
//! directed measures are compared.

use crate::error::{CausalityError, Result};
use crate::series::TimeSeries;

/// Pearson correlation between two aligned series.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    /// Correlation coefficient in `[-1, 1]`.
    pub rho: f64,
    /// Number of aligned observations used.
    pub n: usize,
}

/// Sample Pearson correlation coefficient at lag zero.
///
/// Computed from centered cross- and auto-moments in a single pass order, so
/// `pearson_correlation(x, y)` and `pearson_correlation(y, x)` return
/// bit-identical values. Errors when lengths differ or either series has
/// zero sample variance.
pub fn pearson_correlation(x: &TimeSeries, y: &TimeSeries) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(CausalityError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    let mx = x.mean();
    let my = y.mean();
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (xv, yv) in x.values().iter().zip(y.values()) {
        let dx = xv - mx;
        let dy = yv - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(CausalityError::ConstantSeries {
            name: x.name().to_string(),
        });
    }
    if syy == 0.0 {
        return Err(CausalityError::ConstantSeries {
            name: y.name().to_string(),
        });
    }
    let rho = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(CorrelationResult { rho, n })
}
