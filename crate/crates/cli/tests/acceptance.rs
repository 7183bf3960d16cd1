//! Acceptance gate: nine numbered checks covering estimator-vs-oracle
//! agreement, mathematical invariants, directional power and calibration on
//! synthetic systems, and byte-level reproducibility of the binary.
//!
//! Each check prints one `PASS`/`FAIL` line with its wall-clock time and a
//! short detail string. Lines are written straight to stderr (not through
//! the captured `print!` macros) so they are visible in any test run. The
//! single surrounding `#[test]` fails if any check fails or overruns its
//! time budget.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::panic::catch_unwind;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tscausal_core::exec::derive_seed;
use tscausal_core::{
    ccc_pair, ccm_convergence, delay_embed, etc, gc_test, gen_confounded, gen_coupled_ar,
    gen_coupled_maps, granger_f, least_squares, pearson_correlation, significance_test,
    symbolize, transfer_entropy, CccParams, OrderSpec, SurrogateKind, SurrogateSpec,
    SymbolSequence, TeConfig, TimeSeries,
};

type Check = Result<String, String>;

/// A named acceptance check with its wall-clock budget in seconds.
type NamedCheck = (&'static str, f64, fn() -> Check);

fn announce(line: &str) {
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").ok();
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
}

fn noise_series(name: &str, n: usize, rng: &mut ChaCha8Rng) -> TimeSeries {
    TimeSeries::new(name, (0..n).map(|_| normal(rng)).collect()).expect("n >= 2")
}

fn random_symbols(n: usize, alphabet: u64, rng: &mut ChaCha8Rng) -> SymbolSequence {
    SymbolSequence::new(
        (0..n).map(|_| rng.random_range(0..alphabet)).collect(),
        alphabet,
    )
    .expect("symbols fit the alphabet")
}

// ---------------------------------------------------------------------------
// Check 1: estimators agree with independently coded oracles.
// ---------------------------------------------------------------------------

/// Oracle route for least squares: form the normal equations explicitly and
/// solve them by Gauss-Jordan elimination with partial pivoting.
#[allow(clippy::needless_range_loop)] // index form mirrors the math
fn solve_normal_equations(design: &DMatrix<f64>, target: &DVector<f64>) -> Vec<f64> {
    let k = design.ncols();
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = design.column(i).dot(&design.column(j));
        }
        m[i][k] = design.column(i).dot(target);
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        let d = m[col][col];
        for v in m[col].iter_mut() {
            *v /= d;
        }
        for row in 0..k {
            if row != col {
                let f = m[row][col];
                for j in 0..=k {
                    m[row][j] -= f * m[col][j];
                }
            }
        }
    }
    (0..k).map(|i| m[i][k]).collect()
}

fn plugin_entropy_bits(counts: &HashMap<Vec<u64>, u64>, total: u64) -> f64 {
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.log2()
        })
        .sum()
}

/// Oracle route for information flow: build the joint histogram of
/// (future, target history, source history) tuples and combine four plug-in
/// entropies.
fn te_four_entropy_oracle(target: &SymbolSequence, source: &SymbolSequence, cfg: &TeConfig) -> f64 {
    let (ts, ss) = (target.symbols(), source.symbols());
    let n = ts.len();
    let hist = cfg.k.max(cfg.l);
    let mut full: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut fut_ypast: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut ypast: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut ypast_xpast: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut total = 0u64;
    for t in hist..n {
        let y_fut = ts[t];
        let y_hist = &ts[t - cfg.k..t];
        let x_hist = &ss[t - cfg.l..t];
        let mut key_full = vec![y_fut];
        key_full.extend_from_slice(y_hist);
        key_full.extend_from_slice(x_hist);
        let mut key_fut_ypast = vec![y_fut];
        key_fut_ypast.extend_from_slice(y_hist);
        let mut key_ypast_xpast = y_hist.to_vec();
        key_ypast_xpast.extend_from_slice(x_hist);
        *full.entry(key_full).or_insert(0) += 1;
        *fut_ypast.entry(key_fut_ypast).or_insert(0) += 1;
        *ypast.entry(y_hist.to_vec()).or_insert(0) += 1;
        *ypast_xpast.entry(key_ypast_xpast).or_insert(0) += 1;
        total += 1;
    }
    plugin_entropy_bits(&fut_ypast, total) - plugin_entropy_bits(&ypast, total)
        + plugin_entropy_bits(&ypast_xpast, total)
        - plugin_entropy_bits(&full, total)
}

fn check_1_oracle_agreement() -> Check {
    // Least squares vs normal equations.
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut max_coeff_diff: f64 = 0.0;
    for _ in 0..200 {
        let rows = rng.random_range(20..=50);
        let cols = rng.random_range(1..=4);
        let design = DMatrix::from_fn(rows, cols, |_, _| normal(&mut rng));
        let beta: Vec<f64> = (0..cols).map(|_| normal(&mut rng)).collect();
        let target = DVector::from_fn(rows, |r, _| {
            (0..cols).map(|c| design[(r, c)] * beta[c]).sum::<f64>() + 0.3 * normal(&mut rng)
        });
        let fit = least_squares(&design, &target).map_err(|e| format!("solver failed: {e}"))?;
        let oracle = solve_normal_equations(&design, &target);
        for (a, b) in fit.coeffs.iter().zip(&oracle) {
            max_coeff_diff = max_coeff_diff.max((a - b).abs());
        }
    }
    if max_coeff_diff > 1e-8 {
        return Err(format!(
            "least-squares vs normal equations diverged: max |diff| = {max_coeff_diff:.3e} > 1e-8"
        ));
    }

    // Information flow vs the four-entropy identity.
    let mut max_te_diff: f64 = 0.0;
    for _ in 0..1000 {
        let alphabet = rng.random_range(2..=4);
        let cfg = TeConfig {
            k: rng.random_range(1..=2),
            l: rng.random_range(1..=2),
            bins: alphabet,
        };
        let n = rng.random_range(30..=120);
        let target = random_symbols(n, alphabet, &mut rng);
        let source = random_symbols(n, alphabet, &mut rng);
        let fast = transfer_entropy(&target, &source, &cfg)
            .map_err(|e| format!("estimator failed: {e}"))?
            .te_bits;
        let slow = te_four_entropy_oracle(&target, &source, &cfg);
        max_te_diff = max_te_diff.max((fast - slow).abs());
    }
    if max_te_diff > 1e-10 {
        return Err(format!(
            "information flow vs entropy identity diverged: max |diff| = {max_te_diff:.3e} > 1e-10"
        ));
    }

    // Incremental neighbor search vs exhaustive sort.
    for trial in 0..200 {
        let embedding_dim = rng.random_range(1..=4);
        let delay = rng.random_range(1..=3);
        let n = rng.random_range((embedding_dim - 1) * delay + 10..=150);
        let series = noise_series("m", n, &mut rng);
        let manifold = delay_embed(&series, embedding_dim, delay)
            .map_err(|e| format!("embedding failed: {e}"))?;
        let p = manifold.n_points();
        let mut indices: Vec<usize> = (0..p).collect();
        for i in (1..p).rev() {
            indices.swap(i, rng.random_range(0..=i));
        }
        let lib_size = rng.random_range(3..=p);
        let mut library = indices[..lib_size].to_vec();
        library.sort_unstable();
        let query = rng.random_range(0..p);
        let available = library.iter().filter(|&&i| i != query).count();
        if available == 0 {
            continue;
        }
        let count = rng.random_range(1..=available.min(6));
        let fast = manifold.nearest_neighbors(&library, query, count);
        let dist2 = |a: &[f64], b: &[f64]| -> f64 {
            a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
        };
        let mut oracle: Vec<(f64, usize)> = library
            .iter()
            .copied()
            .filter(|&i| i != query)
            .map(|i| (dist2(manifold.point(query), manifold.point(i)), i))
            .collect();
        oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let oracle: Vec<usize> = oracle.into_iter().take(count).map(|(_, i)| i).collect();
        if fast != oracle {
            return Err(format!(
                "neighbor search mismatch on trial {trial}: got {fast:?}, oracle {oracle:?}"
            ));
        }
    }

    Ok(format!(
        "max coeff diff {max_coeff_diff:.1e}, max flow diff {max_te_diff:.1e}, 200 neighbor sets exact"
    ))
}

// ---------------------------------------------------------------------------
// Check 2: invariants — non-negativity and exact zeros.
// ---------------------------------------------------------------------------

fn check_2_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(202);

    let mut min_f: f64 = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(60..=200);
        let p = rng.random_range(1..=3);
        let a = rng.random_range(-0.8..0.8);
        let mut yv = vec![normal(&mut rng)];
        for _ in 1..n {
            yv.push(a * yv.last().unwrap() + normal(&mut rng));
        }
        let y = TimeSeries::new("y", yv).unwrap();
        let x = noise_series("x", n, &mut rng);
        let f = granger_f(&y, &x, p)
            .map_err(|e| format!("statistic failed: {e}"))?
            .f_stat;
        if f < min_f {
            min_f = f;
        }
        if f < -1e-12 {
            return Err(format!("log-ratio statistic went negative: {f:.3e}"));
        }
    }

    let mut min_te: f64 = f64::INFINITY;
    for _ in 0..1000 {
        let alphabet = rng.random_range(2..=4);
        let cfg = TeConfig {
            k: rng.random_range(1..=2),
            l: rng.random_range(1..=2),
            bins: alphabet,
        };
        let n = rng.random_range(30..=150);
        let target = random_symbols(n, alphabet, &mut rng);
        let source = random_symbols(n, alphabet, &mut rng);
        let te = transfer_entropy(&target, &source, &cfg)
            .map_err(|e| format!("estimator failed: {e}"))?
            .te_bits;
        if te < min_te {
            min_te = te;
        }
        if te < -1e-12 {
            return Err(format!("information flow went negative: {te:.3e}"));
        }
    }

    for i in 0..100 {
        let n = rng.random_range(120..=400);
        let y = noise_series("y", n, &mut rng);
        let r = ccc_pair(&y, &y, &CccParams::default())
            .map_err(|e| format!("self-pair failed: {e}"))?;
        if r.ccc != 0.0 || r.window_values.iter().any(|&w| w != 0.0) {
            return Err(format!(
                "self-coupling must be exactly zero, got {} on trial {i}",
                r.ccc
            ));
        }
    }

    for alphabet in 2..=5u64 {
        for len in 1..=40usize {
            let seq =
                SymbolSequence::new(vec![alphabet - 1; len], alphabet).expect("valid symbols");
            let r = etc(&seq);
            if r.iterations != 0 || r.normalized != 0.0 {
                return Err(format!(
                    "constant sequence (len {len}, alphabet {alphabet}) compressed in {} passes",
                    r.iterations
                ));
            }
        }
    }

    Ok(format!(
        "min log-ratio {min_f:.1e}, min flow {min_te:.1e}, 100 exact self-zeros, all constants incompressible"
    ))
}

// ---------------------------------------------------------------------------
// Check 3: directional power on the linearly coupled pair.
// ---------------------------------------------------------------------------

fn check_3_linear_direction() -> Check {
    let trials = 100;
    let mut tp = 0;
    let mut fp = 0;
    for t in 0..trials {
        let d = gen_coupled_ar(2000, 0.5, 0.5, 0.8, 1.0, derive_seed(3001, t))
            .expect("valid parameters");
        let (x, y) = (&d.series[0], &d.series[1]);
        let fwd = gc_test(y, x, OrderSpec::Fixed(1), 0.01).expect("well-posed");
        let rev = gc_test(x, y, OrderSpec::Fixed(1), 0.01).expect("well-posed");
        if fwd.significant == Some(true) {
            tp += 1;
        }
        if rev.significant == Some(true) {
            fp += 1;
        }
    }
    let tpr = tp as f64 / trials as f64;
    let fpr = fp as f64 / trials as f64;
    if tpr < 0.99 {
        return Err(format!("true-positive rate {tpr:.2} < 0.99"));
    }
    if fpr > 0.05 {
        return Err(format!("reverse false-positive rate {fpr:.2} > 0.05"));
    }
    Ok(format!("tpr {tpr:.2}, reverse fpr {fpr:.2} over {trials} trials"))
}

// ---------------------------------------------------------------------------
// Check 4: calibration under the null.
// ---------------------------------------------------------------------------

fn check_4_null_calibration() -> Check {
    let trials = 500;
    let mut p_values = Vec::with_capacity(trials);
    let mut surrogate_hits = 0;
    for t in 0..trials as u64 {
        let s = derive_seed(4001, t);
        let d = gen_coupled_ar(500, 0.0, 0.0, 0.0, 1.0, s).expect("valid parameters");
        let (x, y) = (&d.series[0], &d.series[1]);
        let fwd = gc_test(y, x, OrderSpec::Fixed(1), 0.05).expect("well-posed");
        p_values.push(fwd.p_value);
        let spec = SurrogateSpec {
            kind: SurrogateKind::Shuffle,
            n_surrogates: 19,
            seed: s,
        };
        let sur = significance_test(
            |sx, ty| granger_f(ty, sx, 1).map(|g| g.f_stat),
            x,
            y,
            &spec,
            0.05,
        )
        .expect("well-posed");
        if sur.significant {
            surrogate_hits += 1;
        }
    }
    p_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = p_values.len() as f64;
    let ks = p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i as f64 + 1.0) / n - p).max(p - i as f64 / n))
        .fold(0.0, f64::max);
    let surrogate_fpr = surrogate_hits as f64 / trials as f64;
    if ks >= 0.08 {
        return Err(format!("analytic p-values not uniform: KS {ks:.3} >= 0.08"));
    }
    if surrogate_fpr > 0.08 {
        return Err(format!(
            "surrogate false-positive rate {surrogate_fpr:.3} > alpha + 0.03 = 0.08"
        ));
    }
    Ok(format!(
        "KS {ks:.3} over {trials} null p-values, surrogate fpr {surrogate_fpr:.3} at alpha 0.05"
    ))
}

// ---------------------------------------------------------------------------
// Check 5: exact one-bit flow through a deterministic binary copy.
// ---------------------------------------------------------------------------

fn check_5_lagged_copy_flow() -> Check {
    let n = 10_000;
    let cfg = TeConfig {
        k: 1,
        l: 1,
        bins: 2,
    };
    let mut worst_fwd_gap: f64 = 0.0;
    let mut worst_rev: f64 = 0.0;
    for t in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(5001, t));
        let bits: Vec<f64> = (0..=n)
            .map(|_| if rng.random::<bool>() { 1.0 } else { 0.0 })
            .collect();
        let x = TimeSeries::new("x", bits[1..].to_vec()).unwrap();
        let y = TimeSeries::new("y", bits[..n].to_vec()).unwrap();
        let sx = symbolize(&x, 2).expect("coin flips vary");
        let sy = symbolize(&y, 2).expect("coin flips vary");
        let fwd = transfer_entropy(&sy, &sx, &cfg).expect("well-posed").te_bits;
        let rev = transfer_entropy(&sx, &sy, &cfg).expect("well-posed").te_bits;
        worst_fwd_gap = worst_fwd_gap.max((fwd - 1.0).abs());
        worst_rev = worst_rev.max(rev);
        if (fwd - 1.0).abs() > 0.02 {
            return Err(format!("forward flow {fwd:.4} bits missed 1.0 +/- 0.02"));
        }
        if rev >= 0.1 {
            return Err(format!("reverse flow {rev:.4} bits >= 0.1"));
        }
    }
    Ok(format!(
        "forward within {worst_fwd_gap:.4} of 1 bit, reverse at most {worst_rev:.4} bits, 5 seeds"
    ))
}

// ---------------------------------------------------------------------------
// Check 6: state-space reconstruction finds the coupling direction.
// ---------------------------------------------------------------------------

const ACCEPT_CCM_LENGTHS: [usize; 6] = [50, 100, 200, 400, 800, 1600];

fn check_6_cross_map_direction() -> Check {
    let trials = 100;
    let mut correct = 0;
    for t in 0..trials {
        let s = derive_seed(6001, t);
        let d = gen_coupled_maps(3000, 3.99, 3.99, 0.4, 0.0, s).expect("valid parameters");
        let r = ccm_convergence(
            &d.series[0],
            &d.series[1],
            3,
            1,
            &ACCEPT_CCM_LENGTHS,
            5,
            0.1,
            s,
        )
        .expect("well-posed");
        let fwd = *r.x_to_y.mean_skill.last().unwrap();
        let rev = *r.y_to_x.mean_skill.last().unwrap();
        if r.x_to_y.converged && fwd > rev {
            correct += 1;
        }
    }
    let mut clean = 0;
    for t in 0..trials {
        let s = derive_seed(6002, t);
        let d = gen_coupled_maps(3000, 3.99, 3.99, 0.0, 0.0, s).expect("valid parameters");
        let r = ccm_convergence(
            &d.series[0],
            &d.series[1],
            3,
            1,
            &ACCEPT_CCM_LENGTHS,
            5,
            0.1,
            s,
        )
        .expect("well-posed");
        if !r.x_to_y.converged && !r.y_to_x.converged {
            clean += 1;
        }
    }
    if correct < 90 {
        return Err(format!(
            "coupled maps: correct direction in {correct}/100 < 90/100"
        ));
    }
    if clean < 90 {
        return Err(format!(
            "independent maps: spurious convergence escaped in {}/100 > 10/100",
            trials - clean
        ));
    }
    Ok(format!(
        "coupled direction {correct}/100, independent non-convergent {clean}/100"
    ))
}

// ---------------------------------------------------------------------------
// Check 7: compression-complexity asymmetry and its null behavior.
// ---------------------------------------------------------------------------

fn check_7_compression_asymmetry() -> Check {
    let trials = 100;
    let params = CccParams::default();
    let mut asym = 0;
    for t in 0..trials {
        let s = derive_seed(7001, t);
        let d = gen_coupled_maps(3000, 3.99, 3.99, 0.4, 0.0, s).expect("valid parameters");
        let fwd = ccc_pair(&d.series[0], &d.series[1], &params).expect("well-posed");
        let rev = ccc_pair(&d.series[1], &d.series[0], &params).expect("well-posed");
        if fwd.ccc.abs() > rev.ccc.abs() {
            asym += 1;
        }
    }
    let mut inside_null = 0;
    for t in 0..trials {
        let s = derive_seed(7002, t);
        let d = gen_coupled_maps(3000, 3.99, 3.99, 0.0, 0.0, s).expect("valid parameters");
        let spec = SurrogateSpec {
            kind: SurrogateKind::Shuffle,
            n_surrogates: 19,
            seed: s,
        };
        let sig = significance_test(
            |x, y| ccc_pair(x, y, &params).map(|r| r.ccc.abs()),
            &d.series[0],
            &d.series[1],
            &spec,
            0.05,
        )
        .expect("well-posed");
        if !sig.significant {
            inside_null += 1;
        }
    }
    if asym < 90 {
        return Err(format!(
            "coupled maps: forward magnitude won in {asym}/100 < 90/100"
        ));
    }
    if inside_null < 90 {
        return Err(format!(
            "independent maps: {}/100 escaped the surrogate null > 10/100",
            trials - inside_null
        ));
    }
    Ok(format!(
        "coupled asymmetry {asym}/100, independent inside null {inside_null}/100"
    ))
}

// ---------------------------------------------------------------------------
// Check 8: the hidden-driver system produces the advertised trap.
// ---------------------------------------------------------------------------

fn check_8_confounded_correlation() -> Check {
    let trials = 100;
    let mut strong = 0;
    for t in 0..trials {
        let d = gen_confounded(2000, 0, 0, 0.1, derive_seed(8001, t)).expect("valid parameters");
        let direct_edge = d.truth.iter().any(|e| {
            (e.source == "x" && e.target == "y") || (e.source == "y" && e.target == "x")
        });
        if direct_edge {
            return Err("truth must not contain a direct x-y edge".to_string());
        }
        let rho = pearson_correlation(&d.series[0], &d.series[1])
            .expect("well-posed")
            .rho;
        if rho > 0.9 {
            strong += 1;
        }
    }
    if strong < 99 {
        return Err(format!(
            "confounded correlation above 0.9 in only {strong}/100 < 99/100"
        ));
    }
    Ok(format!(
        "correlation above 0.9 in {strong}/100 datasets, no direct edge in any truth"
    ))
}

// ---------------------------------------------------------------------------
// Check 9: the binary's serialized output is byte-identical across reruns.
// ---------------------------------------------------------------------------

fn capture_stdout(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tscausal"))
        .args(args)
        .output()
        .map_err(|e| format!("binary failed to start: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "binary exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn content_hash(bytes: &[u8]) -> u64 {
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    bytes.hash(&mut hasher);
    hasher.finish()
}

fn check_9_binary_reproducibility() -> Check {
    let data = std::env::temp_dir().join(format!(
        "tscausal_acceptance_{}.csv",
        std::process::id()
    ));
    let data_text = data.to_str().expect("temp path is UTF-8");
    capture_stdout(&[
        "synth", "--system", "coupled-ar", "--output", data_text, "--n", "400", "--seed", "21",
    ])?;

    let te_args = [
        "te", "--input", data_text, "--surrogates", "19", "--seed", "5", "--format", "jsonl",
    ];
    let te_a = capture_stdout(&te_args)?;
    let te_b = capture_stdout(&te_args)?;

    let bench_args = [
        "bench", "--trials", "2", "--seed", "1", "--format", "jsonl",
    ];
    let bench_a = capture_stdout(&bench_args)?;
    let bench_b = capture_stdout(&bench_args)?;

    std::fs::remove_file(&data).ok();
    let mut truth = data.clone();
    truth.set_extension("truth.csv");
    std::fs::remove_file(truth).ok();

    if te_a != te_b {
        return Err("measure report changed between identical invocations".to_string());
    }
    if bench_a != bench_b {
        return Err("scorecard changed between identical invocations".to_string());
    }
    if bench_a.is_empty() || te_a.is_empty() {
        return Err("binary produced empty reports".to_string());
    }
    Ok(format!(
        "measure hash {:016x}, scorecard hash {:016x}, both stable across reruns",
        content_hash(&te_a),
        content_hash(&bench_a)
    ))
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let checks: Vec<NamedCheck> = vec![
        ("1 oracle agreement", 10.0, check_1_oracle_agreement),
        ("2 invariants", 30.0, check_2_invariants),
        ("3 linear direction", 20.0, check_3_linear_direction),
        ("4 null calibration", 120.0, check_4_null_calibration),
        ("5 lagged-copy flow", 5.0, check_5_lagged_copy_flow),
        ("6 cross-map direction", 180.0, check_6_cross_map_direction),
        ("7 compression asymmetry", 300.0, check_7_compression_asymmetry),
        ("8 confounded trap", 5.0, check_8_confounded_correlation),
        ("9 binary reproducibility", 300.0, check_9_binary_reproducibility),
    ];

    let mut failures = Vec::new();
    for (name, budget, f) in checks {
        let start = Instant::now();
        let outcome = catch_unwind(f);
        let secs = start.elapsed().as_secs_f64();
        let (verdict, detail) = match outcome {
            Ok(Ok(detail)) if secs <= budget => ("PASS", detail),
            Ok(Ok(detail)) => (
                "FAIL",
                format!("{detail} -- but exceeded the {budget:.0}s budget"),
            ),
            Ok(Err(why)) => ("FAIL", why),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        announce(&format!(
            "acceptance {name}: {verdict} ({secs:.1}s) {detail}"
        ));
        if verdict == "FAIL" {
            failures.push(format!("{name}: {detail}"));
        }
    }
    assert!(
        failures.is_empty(),
        "acceptance checks failed:\n{}",
        failures.join("\n")
    );
}
