//! Directed-dependence analysis for pairs of time series.
//!
//! The crate bundles four complementary detectors of directed influence,
//! plus the shared machinery they need:
//!
//! - [`gc`]: linear predictive improvement via nested autoregressions.
//! - [`te`]: information flow between discretized histories.
//! - [`ccc`]: compression-complexity gain over sliding windows.
//! - [`ccm`]: state-space reconstruction and cross-map convergence.
//!
//! Supporting modules: [`series`] (validated series container),
//! [`correlation`] (undirected baseline), [`stationarity`] (advisory
//! screen), [`symbolic`] (discretization and pair-substitution
//! compression), [`ols`] (least squares), [`surrogate`] (permutation
//! nulls and significance), [`synth`] (generators with known ground
//! truth), and [`exec`] (deterministic parallel mapping and seed
//! derivation).
//!
//! Design commitments, enforced by tests: every estimator is
//! deterministic given its inputs and an explicit seed; results are
//! identical whether the `parallel` feature (on by default) is enabled
//! or not; numerical edge cases surface as [`CausalityError`] values
//! rather than silent NaNs.

#![warn(missing_docs)]

pub mod ccc;
pub mod ccm;
pub mod correlation;
pub mod error;
pub mod exec;
pub mod gc;
pub mod ols;
pub mod series;
pub mod stationarity;
pub mod surrogate;
pub mod symbolic;
pub mod synth;
pub mod te;

pub use ccc::{cc_joint, cc_self, ccc_pair, CccParams, CccResult};
pub use ccm::{
    ccm_convergence, cross_map_skill, delay_embed, CcmConvergence, ConvergenceCurve,
    CrossMapResult, Manifold,
};
pub use correlation::{pearson_correlation, CorrelationResult};
pub use error::{CausalityError, Result};
pub use gc::{
    auto_order_cap, fit_restricted, fit_unrestricted, gc_test, granger_f, select_order, GcResult,
    ModelFit, ModelKind, OrderCriterion, OrderSpec,
};
pub use ols::{least_squares, OlsFit};
pub use series::{standardize, TimeSeries};
pub use stationarity::{stationarity_check, stationarity_check_default, StationarityReport};
pub use surrogate::{
    make_surrogate, rearrange, significance_test, SignificanceResult, SurrogateKind,
    SurrogateSpec, MIN_SURROGATES,
};
pub use symbolic::{etc, etc_joint, symbolize, EtcResult, SymbolSequence};
pub use synth::{
    decimate, gen_confounded, gen_coupled_ar, gen_coupled_maps, Edge, SyntheticDataset,
    DEFAULT_GROWTH,
};
pub use te::{effective_te, transfer_entropy, TeConfig, TeResult};
