//! Command-line surface.
//!
//! Shared flags live in [`IoArgs`]; each estimator adds its own knobs with
//! the defaults used throughout the crate's tests. Every stochastic step is
//! driven by `--seed`, and repeated runs with identical flags and seed write
//! byte-identical JSON-lines output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::record::Format;

/// Directed-dependence toolkit for pairs of time series.
#[derive(Debug, Parser)]
#[command(
    name = "tscausal",
    version,
    about = "Estimate directed dependence between time series columns",
    after_help = "Exit codes: 0 success, 1 usage error, 2 data error, \
                  3 partial estimator failure (failed pairs are reported as \
                  records with warnings)."
)]
pub struct Cli {
    /// Which analysis to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Analysis subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pearson correlation for each unordered pair (symmetric baseline).
    Corr(CorrArgs),
    /// Predictive-improvement test via nested autoregressions, both
    /// directions per pair.
    Gc(GcArgs),
    /// Information flow between discretized histories, both directions.
    Te(TeArgs),
    /// Windowed compression-complexity gain, both directions.
    Ccc(CccArgs),
    /// Cross-map convergence on delay embeddings, both directions.
    Ccm(CcmArgs),
    /// Generate a synthetic system with a ground-truth sidecar.
    Synth(SynthArgs),
    /// Score every estimator against synthetic ground truth.
    Bench(BenchArgs),
}

/// Flags shared by all measure subcommands.
#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input CSV: header row of unique column names, decimal data rows.
    #[arg(long)]
    pub input: PathBuf,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Report shape.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Master seed for every stochastic step (surrogates, library draws).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Column pairs as `x:y`, comma-separated (e.g. `x:y,a:b`). Directed
    /// measures evaluate both directions of each pair; omit to use every
    /// pair of columns.
    #[arg(long)]
    pub pairs: Option<String>,

    /// Significance threshold for decisions.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Surrogate count for permutation significance (0 = no surrogate
    /// test). When nonzero, at least 19.
    #[arg(long, default_value_t = 0)]
    pub surrogates: usize,

    /// How surrogate sources are built.
    #[arg(long, value_enum, default_value_t = SurrogateKindArg::Shuffle)]
    pub surrogate_kind: SurrogateKindArg,

    /// Standardize inputs to zero mean and unit variance first. Ignored by
    /// te and ccc, which discretize raw values (binning is already
    /// affine-invariant).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub standardize: bool,
}

/// Surrogate construction scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurrogateKindArg {
    /// Uniform random permutation: destroys all temporal structure.
    Shuffle,
    /// Rotation by a random offset: keeps autocorrelation, breaks
    /// cross-alignment.
    CircularShift,
}

impl From<SurrogateKindArg> for tscausal_core::SurrogateKind {
    fn from(k: SurrogateKindArg) -> Self {
        match k {
            SurrogateKindArg::Shuffle => tscausal_core::SurrogateKind::Shuffle,
            SurrogateKindArg::CircularShift => tscausal_core::SurrogateKind::CircularShift,
        }
    }
}

/// Flags for `corr`.
#[derive(Debug, Args)]
pub struct CorrArgs {
    #[command(flatten)]
    pub io: IoArgs,
}

/// Flags for `gc`.
#[derive(Debug, Args)]
pub struct GcArgs {
    #[command(flatten)]
    pub io: IoArgs,

    /// Lag order: a positive integer, or `auto` for selection by
    /// information criterion.
    #[arg(long, default_value = "auto")]
    pub order: String,

    /// Cap for automatic order selection (default: length-based).
    #[arg(long)]
    pub order_max: Option<usize>,
}

/// Flags for `te`.
#[derive(Debug, Args)]
pub struct TeArgs {
    #[command(flatten)]
    pub io: IoArgs,

    /// Target history length.
    #[arg(long, default_value_t = 1)]
    pub k: usize,

    /// Source history length.
    #[arg(long, default_value_t = 1)]
    pub l: usize,

    /// Alphabet size for discretization.
    #[arg(long, default_value_t = 4)]
    pub bins: u64,

    /// Report bias-corrected flow: raw estimate minus the mean over
    /// source-shuffled surrogates (uses --surrogates, minimum 19).
    #[arg(long)]
    pub effective: bool,
}

/// Flags for `ccc`.
#[derive(Debug, Args)]
pub struct CccArgs {
    #[command(flatten)]
    pub io: IoArgs,

    /// Past-window length.
    #[arg(long = "L", default_value_t = 100)]
    pub past_len: usize,

    /// Future-block length.
    #[arg(long = "w", default_value_t = 15)]
    pub future_len: usize,

    /// Step between window starts.
    #[arg(long, default_value_t = 50)]
    pub delta: usize,

    /// Alphabet size for discretization.
    #[arg(long, default_value_t = 4)]
    pub bins: u64,
}

/// Flags for `ccm`.
#[derive(Debug, Args)]
pub struct CcmArgs {
    #[command(flatten)]
    pub io: IoArgs,

    /// Embedding dimension.
    #[arg(long = "E", default_value_t = 3)]
    pub embedding_dim: usize,

    /// Embedding delay.
    #[arg(long, default_value_t = 1)]
    pub tau: usize,

    /// Library sizes as a strictly increasing comma list (e.g.
    /// `50,100,200,400`). Default: five sizes spanning the manifold.
    #[arg(long)]
    pub lib_lengths: Option<String>,

    /// Library draws averaged per size (minimum 5).
    #[arg(long, default_value_t = 10)]
    pub subsamples: usize,

    /// Minimum terminal-minus-initial skill gain to call convergence.
    #[arg(long, default_value_t = 0.1)]
    pub conv_margin: f64,
}

/// Synthetic system family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthSystem {
    /// Linearly coupled AR(1) pair, x driving y.
    CoupledAr,
    /// Cross-coupled chaotic logistic maps.
    CoupledMaps,
    /// Hidden common driver feeding x and y.
    Confounded,
}

/// Flags for `synth`.
#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Which system to generate.
    #[arg(long, value_enum)]
    pub system: SynthSystem,

    /// Data CSV path; the ground truth lands next to it as
    /// `<stem>.truth.csv`.
    #[arg(long)]
    pub output: PathBuf,

    /// Samples per series (after burn-in).
    #[arg(long, default_value_t = 2000)]
    pub n: usize,

    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// AR self-coefficient of x.
    #[arg(long, default_value_t = 0.5)]
    pub a_x: f64,

    /// AR self-coefficient of y.
    #[arg(long, default_value_t = 0.5)]
    pub a_y: f64,

    /// Coupling strength x -> y for the AR system.
    #[arg(long, default_value_t = 0.8)]
    pub c: f64,

    /// Noise standard deviation (AR innovations / observation noise).
    #[arg(long, default_value_t = 1.0)]
    pub noise_sd: f64,

    /// Logistic growth rate of x.
    #[arg(long, default_value_t = tscausal_core::DEFAULT_GROWTH)]
    pub r_x: f64,

    /// Logistic growth rate of y.
    #[arg(long, default_value_t = tscausal_core::DEFAULT_GROWTH)]
    pub r_y: f64,

    /// Map coupling strength x -> y.
    #[arg(long, default_value_t = 0.4)]
    pub c_xy: f64,

    /// Map coupling strength y -> x.
    #[arg(long, default_value_t = 0.0)]
    pub c_yx: f64,

    /// Driver lag into x for the confounded system.
    #[arg(long, default_value_t = 0)]
    pub lag_x: usize,

    /// Driver lag into y for the confounded system.
    #[arg(long, default_value_t = 0)]
    pub lag_y: usize,

    /// Keep every k-th sample after generation.
    #[arg(long)]
    pub decimate: Option<usize>,
}

/// Flags for `bench`.
#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Battery to run: `coupled_ar`, `white_noise`, `lagged_copy`,
    /// `coupled_maps`, `independent_maps`, `confounded`, or `all`.
    #[arg(long, default_value = "all")]
    pub system: String,

    /// Trials per battery (default: each battery's published count).
    #[arg(long)]
    pub trials: Option<usize>,

    /// Master seed; seed 1 regenerates the published numbers.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Write the scorecard here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Scorecard shape. JSON lines omit wall-clock timings so identical
    /// runs stay byte-identical; timings go to the table and stderr.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}
