//! Error type shared by every estimator in this crate.
//!
//! Estimators are total functions over their documented domains: anything
//! outside the domain is reported as a typed error rather than a panic or a
//! silently wrong number.

use thiserror::Error;

/// Errors produced by series construction, preprocessing, and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausalityError {
    /// A statistic that divides by a variance was asked for on a series with
    /// zero sample variance.
    #[error("series '{name}' has zero variance")]
    ConstantSeries {
        /// Name of the offending series.
        name: String,
    },

    /// Two series that must be aligned sample-by-sample have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch {
        /// Length of the first input.
        left: usize,
        /// Length of the second input.
        right: usize,
    },

    /// The input has too few observations for the requested computation.
    #[error("series too short: need at least {needed} observations, got {actual}")]
    TooShort {
        /// Minimum observations the computation requires.
        needed: usize,
        /// Observations actually supplied.
        actual: usize,
    },

    /// The regression design matrix is rank-deficient (collinear or constant
    /// regressors), so ordinary least squares has no unique solution.
    #[error("singular design matrix: rank {rank} < {cols} columns")]
    SingularDesign {
        /// Numerical rank of the design matrix.
        rank: usize,
        /// Number of columns (regressors including the intercept).
        cols: usize,
    },

    /// A symbol alphabet smaller than two was requested, or symbols fall
    /// outside the declared alphabet.
    #[error("bad alphabet: {reason}")]
    BadAlphabet {
        /// What made the alphabet unusable.
        reason: String,
    },

    /// Delay-embedding parameters are out of range (dimension or delay of
    /// zero).
    #[error("bad embedding: dimension {dim}, delay {delay} (both must be >= 1)")]
    BadEmbedding {
        /// Requested embedding dimension.
        dim: usize,
        /// Requested embedding delay.
        delay: usize,
    },

    /// All candidate neighbor points in a cross-map library are identical, so
    /// nearest-neighbor weights are undefined.
    #[error("degenerate library: all {n_points} library points are identical")]
    DegenerateLibrary {
        /// Size of the degenerate library.
        n_points: usize,
    },

    /// An autoregressive generator was configured outside its stable region.
    #[error("unstable generator: coefficient {coefficient} has modulus >= 1")]
    Unstable {
        /// The destabilizing coefficient.
        coefficient: f64,
    },

    /// A map trajectory left its invariant set despite wrapping; the
    /// generator parameters are bad.
    #[error("trajectory diverged at step {step}: value {value}")]
    Diverged {
        /// Step at which the trajectory left the invariant set.
        step: usize,
        /// The non-finite value produced.
        value: f64,
    },

    /// A value that must be finite (input sample or intermediate) is NaN or
    /// infinite.
    #[error("non-finite value in '{name}' at index {index}")]
    NonFinite {
        /// Name of the series holding the value.
        name: String,
        /// Index of the offending sample.
        index: usize,
    },

    /// A parameter is outside its documented range.
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CausalityError>;
