//! Estimator scorecards on synthetic systems with known ground truth.
//!
//! Each battery runs Monte-Carlo trials of one (system, measure) cell and
//! reports a true-positive rate (truth edges detected), a false-positive
//! rate (detections with no matching truth edge), and cell-specific summary
//! statistics. Trial `t` of a battery is seeded by
//! `derive_seed(derive_seed(master, battery_stream), t)`, so every cell is
//! reproducible in isolation and results never depend on which batteries
//! run together or on thread scheduling. Wall-clock timings go to the table
//! and stderr only; JSON-lines output contains no timing, so identical
//! flags and seed produce byte-identical reports.
//!
//! Systems without any truth edge (`white_noise`, `independent_maps`) have
//! no positives to detect, so their `tpr` is reported as 0. The
//! `confounded` system has no direct x-y edge either: the near-certain
//! high correlation shows up as the cell's *false*-positive rate, which is
//! the point of that battery.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tscausal_core::exec::{derive_seed, map_indexed};
use tscausal_core::{
    ccc_pair, ccm_convergence, gc_test, gen_confounded, gen_coupled_ar, gen_coupled_maps,
    granger_f, pearson_correlation, significance_test, symbolize, transfer_entropy, CccParams,
    CcmConvergence, OrderSpec, SurrogateKind, SurrogateSpec, TeConfig, TimeSeries,
    DEFAULT_GROWTH,
};

use crate::args::BenchArgs;
use crate::error::CliError;
use crate::record::{display_f64, json_f64, json_string, Format};

/// One scorecard row: a measure evaluated on a synthetic system.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    /// Synthetic system name.
    pub system: String,
    /// Measure name, matching the subcommand that exposes it.
    pub measure: String,
    /// Fraction of trials where every truth edge was detected.
    pub tpr: f64,
    /// Fraction of trials with a detection lacking a truth edge.
    pub fpr: f64,
    /// Trials run.
    pub n_trials: usize,
    /// Cell-specific summary statistics, keyed by name.
    pub stats: BTreeMap<String, f64>,
    /// Master seed the whole run was derived from.
    pub seed: u64,
    /// Mean wall-clock per trial; table/stderr only, never serialized.
    pub mean_runtime_ms: f64,
}

impl BenchRecord {
    /// Serializes with a fixed key order (`system`, `measure`, `tpr`,
    /// `fpr`, `n_trials`, `stats`, `seed`); timing is deliberately absent.
    pub fn to_jsonl(&self) -> String {
        let stats = self
            .stats
            .iter()
            .map(|(k, v)| format!("{}:{}", json_string(k), json_f64(*v)))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"system\":{},\"measure\":{},\"tpr\":{},\"fpr\":{},\"n_trials\":{},\"stats\":{{{}}},\"seed\":{}}}",
            json_string(&self.system),
            json_string(&self.measure),
            json_f64(self.tpr),
            json_f64(self.fpr),
            self.n_trials,
            stats,
            self.seed
        )
    }
}

/// Writes scorecard rows in the requested shape.
pub fn emit_bench(
    records: &[BenchRecord],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Data("no scorecard rows to report".to_string()));
    }
    match format {
        Format::Jsonl => {
            for r in records {
                writeln!(out, "{}", r.to_jsonl())?;
            }
        }
        Format::Table => {
            writeln!(
                out,
                "{:<18} {:<8} {:>8} {:>8} {:>7} {:>10}  stats",
                "system", "measure", "tpr", "fpr", "trials", "ms/trial"
            )?;
            for r in records {
                let stats = r
                    .stats
                    .iter()
                    .map(|(k, v)| format!("{k}={}", display_f64(*v)))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    out,
                    "{:<18} {:<8} {:>8} {:>8} {:>7} {:>10}  {}",
                    r.system,
                    r.measure,
                    format!("{:.4}", r.tpr),
                    format!("{:.4}", r.fpr),
                    r.n_trials,
                    format!("{:.1}", r.mean_runtime_ms),
                    stats
                )?;
            }
        }
    }
    Ok(())
}

fn rate(hits: usize, total: usize) -> f64 {
    hits as f64 / total as f64
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for v in values {
        sum += v;
        count += 1;
    }
    sum / count as f64
}

/// One-sample Kolmogorov-Smirnov distance to the uniform distribution on
/// `[0, 1]`.
fn ks_uniform(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("p-values are finite"));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let above = (i as f64 + 1.0) / n - p;
            let below = p - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

fn spec19(seed: u64) -> SurrogateSpec {
    SurrogateSpec {
        kind: SurrogateKind::Shuffle,
        n_surrogates: 19,
        seed,
    }
}

const BENCH_ALPHA: f64 = 0.05;
const CCM_LENGTHS: [usize; 6] = [50, 100, 200, 400, 800, 1600];
const CCM_SUBSAMPLES: usize = 5;
const CCM_MARGIN: f64 = 0.1;

fn ccm_run(x: &TimeSeries, y: &TimeSeries, seed: u64) -> CcmConvergence {
    ccm_convergence(x, y, 3, 1, &CCM_LENGTHS, CCM_SUBSAMPLES, CCM_MARGIN, seed)
        .expect("battery parameters are well-posed")
}

fn terminal(curve: &[f64]) -> f64 {
    *curve.last().expect("curve is non-empty")
}

/// Linearly coupled AR pair scored by the nested-autoregression test at
/// order 1 and a strict threshold.
fn gc_on_coupled_ar(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let alpha = 0.01;
    let rows = map_indexed(trials, |t| {
        let d = gen_coupled_ar(2000, 0.5, 0.5, 0.8, 1.0, derive_seed(seed, t as u64))
            .expect("battery parameters are well-posed");
        let (x, y) = (&d.series[0], &d.series[1]);
        let fwd = gc_test(y, x, OrderSpec::Fixed(1), alpha).expect("well-posed test");
        let rev = gc_test(x, y, OrderSpec::Fixed(1), alpha).expect("well-posed test");
        (
            fwd.significant == Some(true),
            rev.significant == Some(true),
            fwd.f_stat,
            rev.f_stat,
        )
    });
    let tpr = rate(rows.iter().filter(|r| r.0).count(), trials);
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("alpha".to_string(), alpha),
        ("mean_fwd_f".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_rev_f".to_string(), mean(rows.iter().map(|r| r.3))),
        ("n".to_string(), 2000.0),
        ("order".to_string(), 1.0),
    ]);
    (tpr, fpr, stats)
}

/// The same AR pair scored by information flow with shuffle surrogates.
fn te_on_coupled_ar(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let cfg = TeConfig::default();
    let rows = map_indexed(trials, |t| {
        let s = derive_seed(seed, t as u64);
        let d = gen_coupled_ar(2000, 0.5, 0.5, 0.8, 1.0, s)
            .expect("battery parameters are well-posed");
        let (x, y) = (&d.series[0], &d.series[1]);
        let measure = |src: &TimeSeries, tgt: &TimeSeries| {
            let ss = symbolize(src, cfg.bins)?;
            let st = symbolize(tgt, cfg.bins)?;
            transfer_entropy(&st, &ss, &cfg).map(|r| r.te_bits)
        };
        let fwd = significance_test(measure, x, y, &spec19(s), BENCH_ALPHA)
            .expect("well-posed test");
        let rev = significance_test(measure, y, x, &spec19(derive_seed(s, 1)), BENCH_ALPHA)
            .expect("well-posed test");
        (fwd.significant, rev.significant, fwd.observed, rev.observed)
    });
    let tpr = rate(rows.iter().filter(|r| r.0).count(), trials);
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("alpha".to_string(), BENCH_ALPHA),
        ("bins".to_string(), cfg.bins as f64),
        ("mean_fwd_bits".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_rev_bits".to_string(), mean(rows.iter().map(|r| r.3))),
        ("surrogates".to_string(), 19.0),
    ]);
    (tpr, fpr, stats)
}

/// Detection rule shared by the compression-complexity cells: magnitude
/// against shuffle surrogates.
fn ccc_detect(x: &TimeSeries, y: &TimeSeries, seed: u64) -> (f64, bool) {
    let params = CccParams::default();
    let sig = significance_test(
        |s, t| ccc_pair(s, t, &params).map(|r| r.ccc.abs()),
        x,
        y,
        &spec19(seed),
        BENCH_ALPHA,
    )
    .expect("well-posed test");
    (sig.observed, sig.significant)
}

/// Shared compression-complexity battery. On systems with a truth edge the
/// detection claim is comparative (`|fwd| > |rev|`): the magnitude itself is
/// not surrogate-significant even under coupling, because shuffle nulls keep
/// the series' own compressibility. On edge-free systems the claim is that
/// the magnitude stays inside the surrogate null.
fn ccc_battery<G>(generate: G, coupled: bool, trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>)
where
    G: Fn(u64) -> tscausal_core::SyntheticDataset + Sync + Send,
{
    let rows = map_indexed(trials, |t| {
        let s = derive_seed(seed, t as u64);
        let d = generate(s);
        let (x, y) = (&d.series[0], &d.series[1]);
        let (fwd, fwd_sig) = ccc_detect(x, y, s);
        let (rev, rev_sig) = ccc_detect(y, x, derive_seed(s, 1));
        (fwd_sig, rev_sig, fwd, rev, fwd > rev)
    });
    let asym = rate(rows.iter().filter(|r| r.4).count(), trials);
    let fwd_sig_rate = rate(rows.iter().filter(|r| r.0).count(), trials);
    let (tpr, fpr) = if coupled {
        (asym, rate(rows.iter().filter(|r| r.1).count(), trials))
    } else {
        (0.0, fwd_sig_rate)
    };
    let stats = BTreeMap::from([
        ("alpha".to_string(), BENCH_ALPHA),
        ("asym_rate".to_string(), asym),
        ("fwd_sig_rate".to_string(), fwd_sig_rate),
        ("mean_abs_fwd".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_abs_rev".to_string(), mean(rows.iter().map(|r| r.3))),
        ("surrogates".to_string(), 19.0),
    ]);
    (tpr, fpr, stats)
}

fn ccc_on_coupled_ar(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccc_battery(
        |s| gen_coupled_ar(2000, 0.5, 0.5, 0.8, 1.0, s).expect("battery parameters are well-posed"),
        true,
        trials,
        seed,
    )
}

fn ccm_on_coupled_ar(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let rows = map_indexed(trials, |t| {
        let s = derive_seed(seed, t as u64);
        let d = gen_coupled_ar(2000, 0.5, 0.5, 0.8, 1.0, s)
            .expect("battery parameters are well-posed");
        let r = ccm_run(&d.series[0], &d.series[1], s);
        let (fwd, rev) = (terminal(&r.x_to_y.mean_skill), terminal(&r.y_to_x.mean_skill));
        (r.x_to_y.converged && fwd > rev, r.y_to_x.converged, fwd, rev)
    });
    let tpr = rate(rows.iter().filter(|r| r.0).count(), trials);
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("mean_fwd_skill".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_rev_skill".to_string(), mean(rows.iter().map(|r| r.3))),
        ("subsamples".to_string(), CCM_SUBSAMPLES as f64),
    ]);
    (tpr, fpr, stats)
}

/// Independent white noise: the analytic p-value should be uniform and the
/// surrogate test should hold its nominal level.
fn gc_on_white_noise(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let rows = map_indexed(trials, |t| {
        let s = derive_seed(seed, t as u64);
        let d = gen_coupled_ar(500, 0.0, 0.0, 0.0, 1.0, s)
            .expect("battery parameters are well-posed");
        let (x, y) = (&d.series[0], &d.series[1]);
        let fwd = gc_test(y, x, OrderSpec::Fixed(1), BENCH_ALPHA).expect("well-posed test");
        let sur = significance_test(
            |sx, ty| granger_f(ty, sx, 1).map(|g| g.f_stat),
            x,
            y,
            &spec19(s),
            BENCH_ALPHA,
        )
        .expect("well-posed test");
        (fwd.p_value, fwd.significant == Some(true), sur.significant)
    });
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("alpha".to_string(), BENCH_ALPHA),
        ("ks_uniform".to_string(), ks_uniform(rows.iter().map(|r| r.0).collect())),
        ("mean_p".to_string(), mean(rows.iter().map(|r| r.0))),
        (
            "surrogate_fpr".to_string(),
            rate(rows.iter().filter(|r| r.2).count(), trials),
        ),
    ]);
    (0.0, fpr, stats)
}

/// Builds a fair-coin series and its one-step-lagged copy.
pub fn lagged_copy_pair(n: usize, seed: u64) -> (TimeSeries, TimeSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits: Vec<f64> = (0..=n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { 0.0 })
        .collect();
    let x = TimeSeries::new("x", bits[1..].to_vec()).expect("n is large");
    let y = TimeSeries::new("y", bits[..n].to_vec()).expect("n is large");
    (x, y)
}

/// Deterministic lag-1 binary copy: forward flow must saturate at one bit,
/// reverse flow must vanish.
fn te_on_lagged_copy(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let cfg = TeConfig {
        k: 1,
        l: 1,
        bins: 2,
    };
    let rows = map_indexed(trials, |t| {
        let (x, y) = lagged_copy_pair(10_000, derive_seed(seed, t as u64));
        let sx = symbolize(&x, cfg.bins).expect("coin flips are not constant");
        let sy = symbolize(&y, cfg.bins).expect("coin flips are not constant");
        let fwd = transfer_entropy(&sy, &sx, &cfg).expect("well-posed").te_bits;
        let rev = transfer_entropy(&sx, &sy, &cfg).expect("well-posed").te_bits;
        ((fwd - 1.0).abs() <= 0.02 && rev < 0.1, rev >= 0.1, fwd, rev)
    });
    let tpr = rate(rows.iter().filter(|r| r.0).count(), trials);
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("mean_fwd_bits".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_rev_bits".to_string(), mean(rows.iter().map(|r| r.3))),
        ("n".to_string(), 10_000.0),
    ]);
    (tpr, fpr, stats)
}

fn maps_trial(coupled: bool, seed: u64) -> tscausal_core::SyntheticDataset {
    let c_xy = if coupled { 0.4 } else { 0.0 };
    gen_coupled_maps(3000, DEFAULT_GROWTH, DEFAULT_GROWTH, c_xy, 0.0, seed)
        .expect("battery parameters are well-posed")
}

fn ccm_on_maps(coupled: bool, trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let rows = map_indexed(trials, |t| {
        let s = derive_seed(seed, t as u64);
        let d = maps_trial(coupled, s);
        let r = ccm_run(&d.series[0], &d.series[1], s);
        let (fwd, rev) = (terminal(&r.x_to_y.mean_skill), terminal(&r.y_to_x.mean_skill));
        (
            r.x_to_y.converged && fwd > rev,
            if coupled {
                r.y_to_x.converged
            } else {
                r.x_to_y.converged || r.y_to_x.converged
            },
            fwd,
            rev,
        )
    });
    let tpr = if coupled {
        rate(rows.iter().filter(|r| r.0).count(), trials)
    } else {
        0.0
    };
    let fpr = rate(rows.iter().filter(|r| r.1).count(), trials);
    let stats = BTreeMap::from([
        ("mean_fwd_skill".to_string(), mean(rows.iter().map(|r| r.2))),
        ("mean_rev_skill".to_string(), mean(rows.iter().map(|r| r.3))),
        ("subsamples".to_string(), CCM_SUBSAMPLES as f64),
    ]);
    (tpr, fpr, stats)
}

fn ccc_on_maps(coupled: bool, trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccc_battery(move |s| maps_trial(coupled, s), coupled, trials, seed)
}

/// Hidden-driver system: the high x-y correlation is a *false* positive by
/// construction, demonstrating why correlation alone cannot claim causation.
fn corr_on_confounded(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    let rows = map_indexed(trials, |t| {
        let d = gen_confounded(2000, 0, 0, 0.1, derive_seed(seed, t as u64))
            .expect("battery parameters are well-posed");
        let rho = pearson_correlation(&d.series[0], &d.series[1])
            .expect("well-posed")
            .rho;
        (rho > 0.9, rho)
    });
    let fpr = rate(rows.iter().filter(|r| r.0).count(), trials);
    let stats = BTreeMap::from([
        ("mean_rho".to_string(), mean(rows.iter().map(|r| r.1))),
        ("n".to_string(), 2000.0),
        ("threshold".to_string(), 0.9),
    ]);
    (0.0, fpr, stats)
}

type BatteryFn = fn(usize, u64) -> (f64, f64, BTreeMap<String, f64>);

struct Battery {
    system: &'static str,
    measure: &'static str,
    default_trials: usize,
    stream: u64,
    run: BatteryFn,
}

fn ccm_on_coupled_maps(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccm_on_maps(true, trials, seed)
}
fn ccm_on_independent_maps(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccm_on_maps(false, trials, seed)
}
fn ccc_on_coupled_maps(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccc_on_maps(true, trials, seed)
}
fn ccc_on_independent_maps(trials: usize, seed: u64) -> (f64, f64, BTreeMap<String, f64>) {
    ccc_on_maps(false, trials, seed)
}

const BATTERIES: &[Battery] = &[
    Battery { system: "coupled_ar", measure: "gc", default_trials: 100, stream: 0, run: gc_on_coupled_ar },
    Battery { system: "coupled_ar", measure: "te", default_trials: 100, stream: 1, run: te_on_coupled_ar },
    Battery { system: "coupled_ar", measure: "ccc", default_trials: 100, stream: 2, run: ccc_on_coupled_ar },
    Battery { system: "coupled_ar", measure: "ccm", default_trials: 100, stream: 3, run: ccm_on_coupled_ar },
    Battery { system: "white_noise", measure: "gc", default_trials: 500, stream: 4, run: gc_on_white_noise },
    Battery { system: "lagged_copy", measure: "te", default_trials: 100, stream: 5, run: te_on_lagged_copy },
    Battery { system: "coupled_maps", measure: "ccm", default_trials: 100, stream: 6, run: ccm_on_coupled_maps },
    Battery { system: "coupled_maps", measure: "ccc", default_trials: 100, stream: 7, run: ccc_on_coupled_maps },
    Battery { system: "independent_maps", measure: "ccm", default_trials: 100, stream: 8, run: ccm_on_independent_maps },
    Battery { system: "independent_maps", measure: "ccc", default_trials: 100, stream: 9, run: ccc_on_independent_maps },
    Battery { system: "confounded", measure: "corr", default_trials: 100, stream: 10, run: corr_on_confounded },
];

/// Runs the selected batteries and returns their scorecard rows.
pub fn run_bench(args: &BenchArgs) -> Result<Vec<BenchRecord>, CliError> {
    let selected: Vec<&Battery> = if args.system == "all" {
        BATTERIES.iter().collect()
    } else {
        let hits: Vec<&Battery> = BATTERIES
            .iter()
            .filter(|b| b.system == args.system)
            .collect();
        if hits.is_empty() {
            let mut names: Vec<&str> = BATTERIES.iter().map(|b| b.system).collect();
            names.dedup();
            return Err(CliError::Usage(format!(
                "unknown system '{}' (expected one of: {}, all)",
                args.system,
                names.join(", ")
            )));
        }
        hits
    };
    if args.trials == Some(0) {
        return Err(CliError::Usage("--trials must be at least 1".to_string()));
    }

    let mut records = Vec::new();
    for battery in selected {
        let trials = args.trials.unwrap_or(battery.default_trials);
        let start = Instant::now();
        let (tpr, fpr, stats) = (battery.run)(trials, derive_seed(args.seed, battery.stream));
        let elapsed = start.elapsed().as_secs_f64();
        eprintln!(
            "bench {}/{}: {} trials in {:.1}s",
            battery.system, battery.measure, trials, elapsed
        );
        records.push(BenchRecord {
            system: battery.system.to_string(),
            measure: battery.measure.to_string(),
            tpr,
            fpr,
            n_trials: trials,
            stats,
            seed: args.seed,
            mean_runtime_ms: elapsed * 1000.0 / trials as f64,
        });
    }
    Ok(records)
}
