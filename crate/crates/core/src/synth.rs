//! Synthetic systems with known coupling structure.
//!
//! Every generator returns the realized series together with the ground-truth
//! edge list and the parameters that produced them, so detection rates can be
//! scored mechanically. All randomness flows from one explicit seed through a
//! counter-based stream cipher generator; the same seed reproduces the same
//! samples bit for bit on every platform and thread count. Each system runs a
//! fixed 500-step burn-in before recording, so initial conditions are
//! forgotten.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CausalityError, Result};
use crate::series::TimeSeries;

/// Steps discarded before recording begins.
pub const BURN_IN: usize = 500;
/// Smallest sample count a generator will produce.
pub const MIN_SAMPLES: usize = 100;
/// Default growth rate for the coupled unit-interval maps: deep in the
/// chaotic regime but strictly below 4, so the map's image stays inside
/// (0, 1) and the origin can never absorb a trajectory.
pub const DEFAULT_GROWTH: f64 = 3.99;

/// A directed ground-truth dependency.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Name of the driving series.
    pub source: String,
    /// Name of the driven series.
    pub target: String,
    /// Coupling coefficient used in the generator.
    pub strength: f64,
}

/// A generated system: series, true edges, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    /// Realized series, generator-specific order.
    pub series: Vec<TimeSeries>,
    /// True directed dependencies (empty for uncoupled systems).
    pub truth: Vec<Edge>,
    /// Generator parameters in documented order.
    pub params: Vec<(String, f64)>,
    /// Master seed the dataset was drawn from.
    pub seed: u64,
}

fn edge(source: &str, target: &str, strength: f64) -> Edge {
    Edge {
        source: source.to_string(),
        target: target.to_string(),
        strength,
    }
}

fn draw_normal(rng: &mut ChaCha8Rng) -> f64 {
    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
}

/// Two AR(1) processes with one-step linear coupling x -> y:
/// `x_t = a_x x_{t-1} + e_t`, `y_t = a_y y_{t-1} + c x_{t-1} + f_t`,
/// with independent Gaussian noise of standard deviation `noise_sd` on both
/// equations (drawn x first, then y, each step).
///
/// Requires `|a_x| < 1` and `|a_y| < 1` (otherwise the variance grows without
/// bound), `noise_sd > 0`, and at least [`MIN_SAMPLES`] samples.
pub fn gen_coupled_ar(
    n: usize,
    a_x: f64,
    a_y: f64,
    c: f64,
    noise_sd: f64,
    seed: u64,
) -> Result<SyntheticDataset> {
    for a in [a_x, a_y] {
        if !(a.is_finite() && a.abs() < 1.0) {
            return Err(CausalityError::Unstable { coefficient: a });
        }
    }
    if !(noise_sd.is_finite() && noise_sd > 0.0) {
        return Err(CausalityError::BadParameter(format!(
            "noise standard deviation must be positive, got {noise_sd}"
        )));
    }
    if !c.is_finite() {
        return Err(CausalityError::BadParameter(format!(
            "coupling must be finite, got {c}"
        )));
    }
    if n < MIN_SAMPLES {
        return Err(CausalityError::TooShort {
            needed: MIN_SAMPLES,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x_prev = 0.0;
    let mut y_prev = 0.0;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for t in 0..n + BURN_IN {
        let x_t = a_x * x_prev + noise_sd * draw_normal(&mut rng);
        let y_t = a_y * y_prev + c * x_prev + noise_sd * draw_normal(&mut rng);
        if t >= BURN_IN {
            xs.push(x_t);
            ys.push(y_t);
        }
        x_prev = x_t;
        y_prev = y_t;
    }
    let truth = if c != 0.0 { vec![edge("x", "y", c)] } else { Vec::new() };
    Ok(SyntheticDataset {
        series: vec![TimeSeries::new("x", xs)?, TimeSeries::new("y", ys)?],
        truth,
        params: vec![
            ("n".to_string(), n as f64),
            ("a_x".to_string(), a_x),
            ("a_y".to_string(), a_y),
            ("c".to_string(), c),
            ("noise_sd".to_string(), noise_sd),
        ],
        seed,
    })
}

/// Quadratic unit-interval map `r u (1 - u)`; fully chaotic for `r` near 4.
fn logistic(u: f64, r: f64) -> f64 {
    r * u * (1.0 - u)
}

/// Two logistic maps with diffusive cross-coupling, wrapped back onto the
/// unit interval:
/// `x_{t+1} = f(x_t; r_x) + c_yx (y_t - x_t)  mod 1`,
/// `y_{t+1} = f(y_t; r_y) + c_xy (x_t - y_t)  mod 1`.
///
/// `c_xy` injects x into y's update, so it is the strength of the x -> y
/// edge; `c_yx` the reverse. Initial states are drawn uniformly from the
/// open unit interval. Growth rates must lie in (0, 4] so the uncoupled
/// map cannot leave [0, 1]; chaotic dynamics need roughly `r > 3.57`, and
/// the benchmarks use [`DEFAULT_GROWTH`].
pub fn gen_coupled_maps(
    n: usize,
    r_x: f64,
    r_y: f64,
    c_xy: f64,
    c_yx: f64,
    seed: u64,
) -> Result<SyntheticDataset> {
    for r in [r_x, r_y] {
        if !(r.is_finite() && r > 0.0 && r <= 4.0) {
            return Err(CausalityError::BadParameter(format!(
                "map growth rate must lie in (0, 4], got {r}"
            )));
        }
    }
    for c in [c_xy, c_yx] {
        if !c.is_finite() {
            return Err(CausalityError::BadParameter(format!(
                "coupling must be finite, got {c}"
            )));
        }
    }
    if n < MIN_SAMPLES {
        return Err(CausalityError::TooShort {
            needed: MIN_SAMPLES,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let mut y: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for t in 0..n + BURN_IN {
        let x_next = (logistic(x, r_x) + c_yx * (y - x)).rem_euclid(1.0);
        let y_next = (logistic(y, r_y) + c_xy * (x - y)).rem_euclid(1.0);
        if !(x_next.is_finite() && y_next.is_finite()) {
            let bad = if x_next.is_finite() { y_next } else { x_next };
            return Err(CausalityError::Diverged {
                step: t,
                value: bad,
            });
        }
        x = x_next;
        y = y_next;
        if t >= BURN_IN {
            xs.push(x);
            ys.push(y);
        }
    }
    let mut truth = Vec::new();
    if c_xy != 0.0 {
        truth.push(edge("x", "y", c_xy));
    }
    if c_yx != 0.0 {
        truth.push(edge("y", "x", c_yx));
    }
    Ok(SyntheticDataset {
        series: vec![TimeSeries::new("x", xs)?, TimeSeries::new("y", ys)?],
        truth,
        params: vec![
            ("n".to_string(), n as f64),
            ("r_x".to_string(), r_x),
            ("r_y".to_string(), r_y),
            ("c_xy".to_string(), c_xy),
            ("c_yx".to_string(), c_yx),
        ],
        seed,
    })
}

/// A hidden AR(1) driver feeding two observed series at different lags:
/// `z_t = 0.5 z_{t-1} + e_t` (unit noise),
/// `x_t = z_{t-lag_x} + f_t`, `y_t = z_{t-lag_y} + g_t` with observation
/// noise `noise_sd`. Neither observed series drives the other; the truth is
/// `z -> x` and `z -> y`, and any x/y association is spurious.
///
/// The driver is materialized far enough back that both lags are defined at
/// the first recorded step. Series order is x, y, z.
pub fn gen_confounded(
    n: usize,
    lag_x: usize,
    lag_y: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<SyntheticDataset> {
    if !(noise_sd.is_finite() && noise_sd > 0.0) {
        return Err(CausalityError::BadParameter(format!(
            "noise standard deviation must be positive, got {noise_sd}"
        )));
    }
    let max_lag = lag_x.max(lag_y);
    if n < MIN_SAMPLES + max_lag {
        return Err(CausalityError::TooShort {
            needed: MIN_SAMPLES + max_lag,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // z is generated first with enough lead that z_{t-lag} exists for the
    // first recorded t; its own noise is drawn before any observation noise.
    let lead = BURN_IN + max_lag;
    let total = n + lead;
    let mut z_all = Vec::with_capacity(total);
    let mut z_prev = 0.0;
    for _ in 0..total {
        let z_t = 0.5 * z_prev + draw_normal(&mut rng);
        z_all.push(z_t);
        z_prev = z_t;
    }
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for t in 0..n {
        let base = lead + t;
        xs.push(z_all[base - lag_x] + noise_sd * draw_normal(&mut rng));
        ys.push(z_all[base - lag_y] + noise_sd * draw_normal(&mut rng));
    }
    let zs = z_all[lead..].to_vec();
    Ok(SyntheticDataset {
        series: vec![
            TimeSeries::new("x", xs)?,
            TimeSeries::new("y", ys)?,
            TimeSeries::new("z", zs)?,
        ],
        truth: vec![edge("z", "x", 1.0), edge("z", "y", 1.0)],
        params: vec![
            ("n".to_string(), n as f64),
            ("lag_x".to_string(), lag_x as f64),
            ("lag_y".to_string(), lag_y as f64),
            ("noise_sd".to_string(), noise_sd),
        ],
        seed,
    })
}

/// Keeps every `factor`-th sample (indices 0, factor, 2*factor, ...),
/// emulating a slower sampling rate. The result must keep at least two
/// samples.
pub fn decimate(x: &TimeSeries, factor: usize) -> Result<TimeSeries> {
    if factor < 1 {
        return Err(CausalityError::BadParameter(
            "decimation factor must be at least 1".to_string(),
        ));
    }
    let kept: Vec<f64> = x.values().iter().copied().step_by(factor).collect();
    if kept.len() < 2 {
        return Err(CausalityError::TooShort {
            needed: 2,
            actual: kept.len(),
        });
    }
    TimeSeries::new(x.name(), kept)
}
