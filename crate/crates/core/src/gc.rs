//! Regression-based directed dependence: does the past of one series reduce
//! the one-step prediction error of another beyond the target's own past?
//!
//! Two nested autoregressions of the same order are fit by least squares on
//! the identical sample window: the restricted model uses only the target's
//! lags, the unrestricted model adds the source's lags. The headline
//! statistic is the log ratio of the residual variances (maximum-likelihood
//! divisor), which is nonnegative by construction; significance comes from
//! the classical F-statistic on the residual sums of squares. Both numbers
//! are reported. The test is linear and assumes weak stationarity, so a
//! segment-drift warning accompanies the result rather than blocking it.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{CausalityError, Result};
use crate::ols::{least_squares, OlsFit};
use crate::series::TimeSeries;
use crate::stationarity::stationarity_check_default;

/// Which nested model a fit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Target lags only.
    Restricted,
    /// Target lags plus source lags.
    Unrestricted,
}

/// One fitted autoregression.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    /// Which model family the fit belongs to.
    pub kind: ModelKind,
    /// Lag order `p`.
    pub order: usize,
    /// Intercept term.
    pub intercept: f64,
    /// Coefficients on the target's own lags `1..=p`.
    pub coeffs_self: Vec<f64>,
    /// Coefficients on the source's lags `1..=p`; empty for restricted fits.
    pub coeffs_cross: Vec<f64>,
    /// Residuals over the fit window, oldest first.
    pub residuals: Vec<f64>,
    /// Residual variance with the maximum-likelihood divisor `rss / n_eff`.
    pub resid_variance: f64,
    /// Number of fitted observations `n - p`.
    pub n_eff: usize,
}

/// Penalty rule for automatic order selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderCriterion {
    /// Penalty `2k` on the log-likelihood scale.
    Aic,
    /// Penalty `k ln(n)`; consistent, preferred default.
    Bic,
}

/// Requested lag order: a fixed value or data-driven selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSpec {
    /// Use exactly this lag order.
    Fixed(usize),
    /// Select the order by information criterion up to a length-based cap.
    Auto,
}

/// Outcome of a directed regression test for one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GcResult {
    /// Name of the candidate driver.
    pub source: String,
    /// Name of the driven series.
    pub target: String,
    /// Lag order used by both nested fits.
    pub order: usize,
    /// Log ratio of restricted to unrestricted residual variance;
    /// nonnegative up to floating-point error, infinite for a perfect
    /// unrestricted fit.
    pub f_stat: f64,
    /// Classical F-statistic on the residual sums of squares.
    pub f_classical: f64,
    /// Right tail of `F(p, n_eff - 2p - 1)` at `f_classical`.
    pub p_value: f64,
    /// Observations in the common fit window.
    pub n_eff: usize,
    /// True when either input failed the segment-drift diagnostic.
    pub stationarity_warning: bool,
    /// Decision at the caller's alpha; `None` when no alpha was supplied.
    pub significant: Option<bool>,
}

/// Upper cap for automatically selected lag orders.
pub const MAX_AUTO_ORDER: usize = 10;

fn check_order_and_length(n: usize, p: usize) -> Result<()> {
    if p < 1 {
        return Err(CausalityError::BadParameter(
            "lag order must be >= 1".to_string(),
        ));
    }
    // All F-test degrees of freedom stay positive iff n > 3p + 2.
    if n <= 3 * p + 2 {
        return Err(CausalityError::TooShort {
            needed: 3 * p + 3,
            actual: n,
        });
    }
    Ok(())
}

/// Builds the lagged design for targets `t = p..n-1`: an intercept column,
/// `p` lags of `primary`, and (when given) `p` lags of `secondary`.
fn lagged_design(
    primary: &[f64],
    secondary: Option<&[f64]>,
    p: usize,
    window_start: usize,
) -> (DMatrix<f64>, DVector<f64>) {
    let n = primary.len();
    let rows = n - window_start;
    let cols = 1 + p + if secondary.is_some() { p } else { 0 };
    let mut design = DMatrix::zeros(rows, cols);
    for (r, t) in (window_start..n).enumerate() {
        design[(r, 0)] = 1.0;
        for lag in 1..=p {
            design[(r, lag)] = primary[t - lag];
        }
        if let Some(sec) = secondary {
            for lag in 1..=p {
                design[(r, p + lag)] = sec[t - lag];
            }
        }
    }
    let target = DVector::from_fn(rows, |r, _| primary[window_start + r]);
    (design, target)
}

fn build_fit(kind: ModelKind, order: usize, fit: OlsFit, n_eff: usize) -> ModelFit {
    let p = order;
    let coeffs_self = fit.coeffs[1..=p].to_vec();
    let coeffs_cross = match kind {
        ModelKind::Restricted => Vec::new(),
        ModelKind::Unrestricted => fit.coeffs[p + 1..=2 * p].to_vec(),
    };
    let resid_variance = fit.rss / n_eff as f64;
    ModelFit {
        kind,
        order,
        intercept: fit.coeffs[0],
        coeffs_self,
        coeffs_cross,
        residuals: fit.residuals,
        resid_variance,
        n_eff,
    }
}

/// Fits the restricted model: `y(t)` on an intercept and `y(t-1..t-p)`,
/// over the window `t = p..n-1`.
pub fn fit_restricted(y: &TimeSeries, p: usize) -> Result<ModelFit> {
    check_order_and_length(y.len(), p)?;
    let (design, target) = lagged_design(y.values(), None, p, p);
    let fit = least_squares(&design, &target)?;
    Ok(build_fit(ModelKind::Restricted, p, fit, y.len() - p))
}

/// Fits the unrestricted model: `y(t)` on an intercept, `y(t-1..t-p)`, and
/// `x(t-1..t-p)`, over the same window as [`fit_restricted`].
pub fn fit_unrestricted(y: &TimeSeries, x: &TimeSeries, p: usize) -> Result<ModelFit> {
    if y.len() != x.len() {
        return Err(CausalityError::LengthMismatch {
            left: y.len(),
            right: x.len(),
        });
    }
    check_order_and_length(y.len(), p)?;
    let (design, target) = lagged_design(y.values(), Some(x.values()), p, p);
    let fit = least_squares(&design, &target)?;
    Ok(build_fit(ModelKind::Unrestricted, p, fit, y.len() - p))
}

/// Directed statistic for `x -> y` at fixed order `p`.
///
/// Both nested models are fit on bit-identical target windows, which is what
/// guarantees `rss_restricted >= rss_unrestricted` and hence a nonnegative
/// log-ratio statistic. A perfect unrestricted fit yields an infinite
/// statistic with p-value zero; perfect fits of both models mean the source
/// added nothing and yield zero with p-value one. "Perfect" is judged
/// relative to the target window's energy at machine precision, so an exact
/// lagged copy lands in the sentinel branch despite rounding in the solver.
pub fn granger_f(y: &TimeSeries, x: &TimeSeries, p: usize) -> Result<GcResult> {
    let restricted = fit_restricted(y, p)?;
    let unrestricted = fit_unrestricted(y, x, p)?;
    let n_eff = restricted.n_eff;
    let rss_r: f64 = restricted.residuals.iter().map(|r| r * r).sum();
    let rss_u: f64 = unrestricted.residuals.iter().map(|r| r * r).sum();

    let target_energy: f64 = y.values()[p..].iter().map(|v| v * v).sum();
    let perfect_fit = 100.0 * n_eff as f64 * f64::EPSILON * f64::EPSILON * target_energy;

    let dof_num = p as f64;
    let dof_den = (n_eff - 2 * p - 1) as f64;
    let (f_stat, f_classical, p_value) = if rss_u <= perfect_fit {
        if rss_r <= perfect_fit {
            (0.0, 0.0, 1.0)
        } else {
            (f64::INFINITY, f64::INFINITY, 0.0)
        }
    } else {
        let f_stat = (rss_r / rss_u).ln();
        let f_classical = (((rss_r - rss_u) / dof_num) / (rss_u / dof_den)).max(0.0);
        let dist = FisherSnedecor::new(dof_num, dof_den).map_err(|e| {
            CausalityError::BadParameter(format!("F distribution: {e}"))
        })?;
        (f_stat, f_classical, dist.sf(f_classical))
    };

    Ok(GcResult {
        source: x.name().to_string(),
        target: y.name().to_string(),
        order: p,
        f_stat,
        f_classical,
        p_value,
        n_eff,
        stationarity_warning: false,
        significant: None,
    })
}

/// Picks the lag order for the unrestricted model by information criterion.
///
/// Every candidate `p = 1..=p_max` is scored on the common window
/// `t = p_max..n-1`, so all candidates predict the same targets and their
/// scores are comparable. Ties go to the smaller order.
pub fn select_order(
    y: &TimeSeries,
    x: &TimeSeries,
    p_max: usize,
    criterion: OrderCriterion,
) -> Result<usize> {
    if y.len() != x.len() {
        return Err(CausalityError::LengthMismatch {
            left: y.len(),
            right: x.len(),
        });
    }
    check_order_and_length(y.len(), p_max)?;
    let n_w = (y.len() - p_max) as f64;
    let mut best: Option<(f64, usize)> = None;
    for p in 1..=p_max {
        let (design, target) = lagged_design(y.values(), Some(x.values()), p, p_max);
        let fit = least_squares(&design, &target)?;
        let k = (2 * p + 1) as f64;
        let penalty = match criterion {
            OrderCriterion::Aic => 2.0 * k,
            OrderCriterion::Bic => k * n_w.ln(),
        };
        let score = n_w * (fit.rss / n_w).ln() + penalty;
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, p));
        }
    }
    Ok(best.expect("p_max >= 1 guarantees at least one candidate").1)
}

/// Default automatic order cap for a series of length `n`.
pub fn auto_order_cap(n: usize) -> usize {
    (n / 20).clamp(1, MAX_AUTO_ORDER)
}

/// Full directed test for `x -> y`: stationarity screen, order resolution,
/// statistic, and decision at `alpha`.
///
/// A failed stationarity screen on either input sets a warning on the result
/// but does not block the test.
pub fn gc_test(y: &TimeSeries, x: &TimeSeries, order: OrderSpec, alpha: f64) -> Result<GcResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CausalityError::BadParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    // The screen is advisory; series too short to screen simply pass.
    let warning = [y, x].iter().any(|s| {
        stationarity_check_default(s).is_ok_and(|r| !r.passed)
    });
    let p = match order {
        OrderSpec::Fixed(p) => p,
        OrderSpec::Auto => select_order(y, x, auto_order_cap(y.len()), OrderCriterion::Bic)?,
    };
    let mut result = granger_f(y, x, p)?;
    result.stationarity_warning = warning;
    result.significant = Some(result.p_value <= alpha);
    Ok(result)
}
