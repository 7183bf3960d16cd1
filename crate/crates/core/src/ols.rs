//! Ordinary least squares on small, dense design matrices.
//!
//! Solved through a singular value decomposition rather than the normal
//! equations, which keeps the solve stable for nearly collinear lag columns
//! and gives a reliable numerical rank to detect genuinely singular designs.

use nalgebra::{DMatrix, DVector};

use crate::error::{CausalityError, Result};

/// Coefficients and residuals of one least-squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    /// Coefficients in design-column order.
    pub coeffs: Vec<f64>,
    /// Per-row residuals `y - X b`.
    pub residuals: Vec<f64>,
    /// Residual sum of squares.
    pub rss: f64,
}

/// Minimizes `||X b - y||^2` via SVD.
///
/// Errors with [`CausalityError::SingularDesign`] when the numerical rank
/// (singular values above `max(rows, cols) * eps * sigma_max`) is below the
/// column count, e.g. for duplicated or constant regressors.
pub fn least_squares(design: &DMatrix<f64>, target: &DVector<f64>) -> Result<OlsFit> {
    let (rows, cols) = design.shape();
    assert!(
        rows >= cols && cols >= 1,
        "design must be tall: {rows}x{cols}"
    );
    let svd = design.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = rows.max(cols) as f64 * f64::EPSILON * sigma_max;
    let rank = svd.rank(tol);
    if rank < cols {
        return Err(CausalityError::SingularDesign { rank, cols });
    }
    let solution = svd
        .solve(target, tol)
        .expect("SVD was computed with both factor sets");
    let fitted = design * &solution;
    let residuals: Vec<f64> = target.iter().zip(fitted.iter()).map(|(y, f)| y - f).collect();
    let rss = residuals.iter().map(|r| r * r).sum();
    Ok(OlsFit {
        coeffs: solution.iter().cloned().collect(),
        residuals,
        rss,
    })
}
