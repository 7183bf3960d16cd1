//! Measure dispatch: from parsed flags to result records.
//!
//! Directed measures evaluate each requested pair in both directions; the
//! symmetric correlation gets one record per unordered pair. A pair whose
//! estimate fails does not abort the run: the failure becomes a record with
//! a `NaN` score and the error text in `warnings`, and the caller maps "any
//! failures" to the partial-failure exit status. Records are emitted in a
//! canonical order (pair listing order, forward before reverse), so output
//! bytes never depend on evaluation order.

use std::collections::BTreeMap;

use tscausal_core::{
    auto_order_cap, ccc_pair, ccm_convergence, effective_te, gc_test, granger_f,
    pearson_correlation, significance_test, standardize, symbolize, transfer_entropy, CccParams,
    OrderCriterion, OrderSpec, Result as CoreResult, SurrogateSpec, TeConfig, TimeSeries,
    MIN_SURROGATES,
};

use crate::args::{CccArgs, CcmArgs, CorrArgs, GcArgs, IoArgs, SynthArgs, SynthSystem, TeArgs};
use crate::csvio::{parse_csv, truth_path, write_csv, write_truth};
use crate::error::CliError;
use crate::record::{ParamValue, ResultRecord};

/// Records plus a flag for whether any pair failed.
#[derive(Debug)]
pub struct RunOutcome {
    /// All records in canonical order.
    pub records: Vec<ResultRecord>,
    /// True when at least one pair's estimate failed.
    pub any_failed: bool,
}

fn preflight(io: &IoArgs) -> Result<(), CliError> {
    if !(io.alpha > 0.0 && io.alpha < 1.0) {
        return Err(CliError::Usage(format!(
            "--alpha must lie in (0, 1), got {}",
            io.alpha
        )));
    }
    if io.surrogates > 0 && io.surrogates < MIN_SURROGATES {
        return Err(CliError::Usage(format!(
            "--surrogates must be 0 or at least {MIN_SURROGATES}, got {}",
            io.surrogates
        )));
    }
    Ok(())
}

fn find_column(series: &[TimeSeries], name: &str) -> Result<usize, CliError> {
    series.iter().position(|s| s.name() == name).ok_or_else(|| {
        let available: Vec<&str> = series.iter().map(|s| s.name()).collect();
        CliError::Data(format!(
            "no column named '{name}' (available: {})",
            available.join(", ")
        ))
    })
}

/// Resolves `--pairs` to index pairs; defaults to every unordered pair of
/// columns in header order.
fn resolve_pairs(
    series: &[TimeSeries],
    spec: Option<&str>,
) -> Result<Vec<(usize, usize)>, CliError> {
    match spec {
        Some(text) => {
            let mut pairs = Vec::new();
            for item in text.split(',') {
                let item = item.trim();
                let (a, b) = item.split_once(':').ok_or_else(|| {
                    CliError::Usage(format!(
                        "--pairs items must look like 'x:y', got '{item}'"
                    ))
                })?;
                pairs.push((find_column(series, a.trim())?, find_column(series, b.trim())?));
            }
            if pairs.is_empty() {
                return Err(CliError::Usage("--pairs lists no pairs".to_string()));
            }
            Ok(pairs)
        }
        None => {
            if series.len() < 2 {
                return Err(CliError::Data(
                    "need at least two columns when --pairs is omitted".to_string(),
                ));
            }
            let mut pairs = Vec::new();
            for i in 0..series.len() {
                for j in i + 1..series.len() {
                    pairs.push((i, j));
                }
            }
            Ok(pairs)
        }
    }
}

fn prepared(series: &TimeSeries, rescale: bool) -> CoreResult<TimeSeries> {
    if rescale {
        standardize(series)
    } else {
        Ok(series.clone())
    }
}

fn base_record(measure: &str, source: &str, target: &str, seed: u64) -> ResultRecord {
    ResultRecord {
        measure: measure.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        score: f64::NAN,
        p_value: None,
        significant: None,
        params: BTreeMap::new(),
        seed,
        warnings: Vec::new(),
    }
}

fn surrogate_params(params: &mut BTreeMap<String, ParamValue>, io: &IoArgs) {
    params.insert("surrogates".to_string(), ParamValue::Int(io.surrogates as i64));
    if io.surrogates > 0 {
        let kind = format!("{:?}", io.surrogate_kind).to_lowercase();
        params.insert("surrogate_kind".to_string(), ParamValue::Text(kind));
        params.insert("alpha".to_string(), ParamValue::Float(io.alpha));
    }
}

/// Runs `body` for both directions of every pair, collecting failures as
/// warning records.
fn directed_run<F>(
    series: &[TimeSeries],
    pairs: &[(usize, usize)],
    measure: &str,
    seed: u64,
    mut body: F,
) -> RunOutcome
where
    F: FnMut(&TimeSeries, &TimeSeries, &mut ResultRecord) -> CoreResult<()>,
{
    let mut records = Vec::new();
    let mut any_failed = false;
    for &(a, b) in pairs {
        for (si, ti) in [(a, b), (b, a)] {
            let (src, tgt) = (&series[si], &series[ti]);
            let mut record = base_record(measure, src.name(), tgt.name(), seed);
            if let Err(e) = body(src, tgt, &mut record) {
                record.score = f64::NAN;
                record.warnings.push(format!("estimate failed: {e}"));
                any_failed = true;
            }
            records.push(record);
        }
    }
    RunOutcome { records, any_failed }
}

/// Pearson correlation per unordered pair.
pub fn run_corr(args: &CorrArgs) -> Result<RunOutcome, CliError> {
    preflight(&args.io)?;
    let series = parse_csv(&args.io.input)?;
    let pairs = resolve_pairs(&series, args.io.pairs.as_deref())?;
    let io = &args.io;

    let mut records = Vec::new();
    let mut any_failed = false;
    for &(a, b) in &pairs {
        let (x, y) = (&series[a], &series[b]);
        let mut record = base_record("corr", x.name(), y.name(), io.seed);
        record
            .params
            .insert("n".to_string(), ParamValue::Int(x.len() as i64));
        record.params.insert(
            "standardize".to_string(),
            ParamValue::Bool(io.standardize),
        );
        surrogate_params(&mut record.params, io);
        let outcome = (|| -> CoreResult<()> {
            let xs = prepared(x, io.standardize)?;
            let ys = prepared(y, io.standardize)?;
            let r = pearson_correlation(&xs, &ys)?;
            record.score = r.rho;
            if io.surrogates > 0 {
                let spec = SurrogateSpec {
                    kind: io.surrogate_kind.into(),
                    n_surrogates: io.surrogates,
                    seed: io.seed,
                };
                let sig = significance_test(
                    |sx, ty| pearson_correlation(sx, ty).map(|c| c.rho.abs()),
                    &xs,
                    &ys,
                    &spec,
                    io.alpha,
                )?;
                record.p_value = Some(sig.p_value);
                record.significant = Some(sig.significant);
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            record.score = f64::NAN;
            record.warnings.push(format!("estimate failed: {e}"));
            any_failed = true;
        }
        records.push(record);
    }
    Ok(RunOutcome { records, any_failed })
}

enum OrderMode {
    Fixed(usize),
    Auto,
}

fn parse_order(text: &str) -> Result<OrderMode, CliError> {
    if text.eq_ignore_ascii_case("auto") {
        return Ok(OrderMode::Auto);
    }
    match text.parse::<usize>() {
        Ok(p) if p >= 1 => Ok(OrderMode::Fixed(p)),
        _ => Err(CliError::Usage(format!(
            "--order must be 'auto' or a positive integer, got '{text}'"
        ))),
    }
}

/// Nested-autoregression test, both directions per pair.
pub fn run_gc(args: &GcArgs) -> Result<RunOutcome, CliError> {
    preflight(&args.io)?;
    let mode = parse_order(&args.order)?;
    if let Some(cap) = args.order_max {
        if cap < 1 {
            return Err(CliError::Usage("--order-max must be at least 1".to_string()));
        }
    }
    let series = parse_csv(&args.io.input)?;
    let pairs = resolve_pairs(&series, args.io.pairs.as_deref())?;
    let io = &args.io;

    Ok(directed_run(&series, &pairs, "gc", io.seed, |src, tgt, record| {
        let x = prepared(src, io.standardize)?;
        let y = prepared(tgt, io.standardize)?;
        let (p, mode_name) = match mode {
            OrderMode::Fixed(p) => (p, "fixed"),
            OrderMode::Auto => {
                let cap = args.order_max.unwrap_or_else(|| auto_order_cap(y.len()));
                (
                    tscausal_core::select_order(&y, &x, cap, OrderCriterion::Bic)?,
                    "auto",
                )
            }
        };
        let r = gc_test(&y, &x, OrderSpec::Fixed(p), io.alpha)?;
        record.score = r.f_stat;
        record.p_value = Some(r.p_value);
        record.significant = r.significant;
        let mut p_value_kind = "analytic";
        if io.surrogates > 0 {
            let spec = SurrogateSpec {
                kind: io.surrogate_kind.into(),
                n_surrogates: io.surrogates,
                seed: io.seed,
            };
            let sig = significance_test(
                |sx, ty| granger_f(ty, sx, p).map(|g| g.f_stat),
                &x,
                &y,
                &spec,
                io.alpha,
            )?;
            record.p_value = Some(sig.p_value);
            record.significant = Some(sig.significant);
            p_value_kind = "surrogate";
        }
        if r.stationarity_warning {
            record.warnings.push(
                "stationarity screen failed for at least one input; the test assumes \
                 time-invariant moments"
                    .to_string(),
            );
        }
        record.params.insert("n".to_string(), ParamValue::Int(y.len() as i64));
        record.params.insert("order".to_string(), ParamValue::Int(p as i64));
        record
            .params
            .insert("order_mode".to_string(), ParamValue::Text(mode_name.to_string()));
        record.params.insert("alpha".to_string(), ParamValue::Float(io.alpha));
        record.params.insert(
            "standardize".to_string(),
            ParamValue::Bool(io.standardize),
        );
        record.params.insert(
            "p_value_kind".to_string(),
            ParamValue::Text(p_value_kind.to_string()),
        );
        surrogate_params(&mut record.params, io);
        Ok(())
    }))
}

/// Information-flow estimate, both directions per pair. Raw values are
/// discretized directly; `--standardize` is ignored here because binning is
/// affine-invariant.
pub fn run_te(args: &TeArgs) -> Result<RunOutcome, CliError> {
    preflight(&args.io)?;
    let series = parse_csv(&args.io.input)?;
    let pairs = resolve_pairs(&series, args.io.pairs.as_deref())?;
    let io = &args.io;
    let cfg = TeConfig {
        k: args.k,
        l: args.l,
        bins: args.bins,
    };
    let effective_surrogates = if io.surrogates > 0 {
        io.surrogates
    } else {
        MIN_SURROGATES
    };

    Ok(directed_run(&series, &pairs, "te", io.seed, |src, tgt, record| {
        let sx = symbolize(src, args.bins)?;
        let sy = symbolize(tgt, args.bins)?;
        if args.effective {
            let r = effective_te(&sy, &sx, &cfg, effective_surrogates, io.seed)?;
            record.score = r
                .effective_te_bits
                .expect("effective estimate always carries the corrected value");
        } else {
            let r = transfer_entropy(&sy, &sx, &cfg)?;
            record.score = r.te_bits;
            if io.surrogates > 0 {
                let spec = SurrogateSpec {
                    kind: io.surrogate_kind.into(),
                    n_surrogates: io.surrogates,
                    seed: io.seed,
                };
                let sig = significance_test(
                    |s, t| {
                        let ss = symbolize(s, args.bins)?;
                        let st = symbolize(t, args.bins)?;
                        transfer_entropy(&st, &ss, &cfg).map(|r| r.te_bits)
                    },
                    src,
                    tgt,
                    &spec,
                    io.alpha,
                )?;
                record.p_value = Some(sig.p_value);
                record.significant = Some(sig.significant);
            }
        }
        record.params.insert("n".to_string(), ParamValue::Int(src.len() as i64));
        record.params.insert("k".to_string(), ParamValue::Int(args.k as i64));
        record.params.insert("l".to_string(), ParamValue::Int(args.l as i64));
        record.params.insert("bins".to_string(), ParamValue::Int(args.bins as i64));
        record
            .params
            .insert("effective".to_string(), ParamValue::Bool(args.effective));
        if args.effective {
            record.params.insert(
                "surrogates".to_string(),
                ParamValue::Int(effective_surrogates as i64),
            );
        } else {
            surrogate_params(&mut record.params, io);
        }
        Ok(())
    }))
}

/// Windowed compression-complexity score, both directions per pair. Raw
/// values are discretized directly, as with `te`.
pub fn run_ccc(args: &CccArgs) -> Result<RunOutcome, CliError> {
    preflight(&args.io)?;
    let series = parse_csv(&args.io.input)?;
    let pairs = resolve_pairs(&series, args.io.pairs.as_deref())?;
    let io = &args.io;
    let params = CccParams {
        past_len: args.past_len,
        future_len: args.future_len,
        step: args.delta,
        bins: args.bins,
    };

    Ok(directed_run(&series, &pairs, "ccc", io.seed, |src, tgt, record| {
        let r = ccc_pair(src, tgt, &params)?;
        record.score = r.ccc;
        if io.surrogates > 0 {
            let spec = SurrogateSpec {
                kind: io.surrogate_kind.into(),
                n_surrogates: io.surrogates,
                seed: io.seed,
            };
            let sig = significance_test(
                |s, t| ccc_pair(s, t, &params).map(|v| v.ccc.abs()),
                src,
                tgt,
                &spec,
                io.alpha,
            )?;
            record.p_value = Some(sig.p_value);
            record.significant = Some(sig.significant);
        }
        record.params.insert("n".to_string(), ParamValue::Int(src.len() as i64));
        record
            .params
            .insert("L".to_string(), ParamValue::Int(args.past_len as i64));
        record
            .params
            .insert("w".to_string(), ParamValue::Int(args.future_len as i64));
        record
            .params
            .insert("delta".to_string(), ParamValue::Int(args.delta as i64));
        record.params.insert("bins".to_string(), ParamValue::Int(args.bins as i64));
        surrogate_params(&mut record.params, io);
        Ok(())
    }))
}

fn parse_lib_lengths(text: &str) -> Result<Vec<usize>, CliError> {
    let lengths: Result<Vec<usize>, _> =
        text.split(',').map(|t| t.trim().parse::<usize>()).collect();
    let lengths = lengths.map_err(|_| {
        CliError::Usage(format!(
            "--lib-lengths must be a comma list of positive integers, got '{text}'"
        ))
    })?;
    if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "--lib-lengths must be strictly increasing".to_string(),
        ));
    }
    Ok(lengths)
}

/// Five library sizes spanning the manifold: from a tenth of the points (at
/// least enough for the neighbor rule) up to four fifths.
fn default_lib_lengths(n_points: usize, embedding_dim: usize) -> Vec<usize> {
    let lo = (n_points / 10).max(embedding_dim + 2);
    let hi = (4 * n_points) / 5;
    let mut lengths = Vec::new();
    for i in 0..5 {
        let l = lo + (hi.saturating_sub(lo)) * i / 4;
        if lengths.last() != Some(&l) && l <= n_points {
            lengths.push(l);
        }
    }
    lengths
}

/// Cross-map convergence; one reconstruction per pair serves both
/// directions.
pub fn run_ccm(args: &CcmArgs) -> Result<RunOutcome, CliError> {
    preflight(&args.io)?;
    if args.subsamples < 5 {
        return Err(CliError::Usage(format!(
            "--subsamples must be at least 5, got {}",
            args.subsamples
        )));
    }
    let explicit_lengths = args
        .lib_lengths
        .as_deref()
        .map(parse_lib_lengths)
        .transpose()?;
    let series = parse_csv(&args.io.input)?;
    let pairs = resolve_pairs(&series, args.io.pairs.as_deref())?;
    let io = &args.io;

    let mut records = Vec::new();
    let mut any_failed = false;
    for &(a, b) in &pairs {
        let (x, y) = (&series[a], &series[b]);
        let mut fwd = base_record("ccm", x.name(), y.name(), io.seed);
        let mut rev = base_record("ccm", y.name(), x.name(), io.seed);
        let outcome = (|| -> CoreResult<(f64, bool, f64, bool, Vec<usize>)> {
            let xs = prepared(x, io.standardize)?;
            let ys = prepared(y, io.standardize)?;
            let n_points = xs.len().saturating_sub((args.embedding_dim - 1) * args.tau);
            let lengths = match &explicit_lengths {
                Some(l) => l.clone(),
                None => default_lib_lengths(n_points, args.embedding_dim),
            };
            let r = ccm_convergence(
                &xs,
                &ys,
                args.embedding_dim,
                args.tau,
                &lengths,
                args.subsamples,
                args.conv_margin,
                io.seed,
            )?;
            Ok((
                *r.x_to_y.mean_skill.last().expect("curve is non-empty"),
                r.x_to_y.converged,
                *r.y_to_x.mean_skill.last().expect("curve is non-empty"),
                r.y_to_x.converged,
                lengths,
            ))
        })();
        match outcome {
            Ok((skill_fwd, conv_fwd, skill_rev, conv_rev, lengths)) => {
                let lengths_text = lengths
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                for (record, skill, converged) in [
                    (&mut fwd, skill_fwd, conv_fwd),
                    (&mut rev, skill_rev, conv_rev),
                ] {
                    record.score = skill;
                    record.significant = Some(converged);
                    record.params.insert("n".to_string(), ParamValue::Int(x.len() as i64));
                    record.params.insert(
                        "E".to_string(),
                        ParamValue::Int(args.embedding_dim as i64),
                    );
                    record.params.insert("tau".to_string(), ParamValue::Int(args.tau as i64));
                    record.params.insert(
                        "lib_lengths".to_string(),
                        ParamValue::Text(lengths_text.clone()),
                    );
                    record.params.insert(
                        "subsamples".to_string(),
                        ParamValue::Int(args.subsamples as i64),
                    );
                    record.params.insert(
                        "conv_margin".to_string(),
                        ParamValue::Float(args.conv_margin),
                    );
                    record.params.insert(
                        "standardize".to_string(),
                        ParamValue::Bool(io.standardize),
                    );
                }
            }
            Err(e) => {
                for record in [&mut fwd, &mut rev] {
                    record.score = f64::NAN;
                    record.warnings.push(format!("estimate failed: {e}"));
                }
                any_failed = true;
            }
        }
        records.push(fwd);
        records.push(rev);
    }
    Ok(RunOutcome { records, any_failed })
}

/// Generates a synthetic system, writes the data CSV and its truth sidecar,
/// and returns a one-line summary.
pub fn run_synth(args: &SynthArgs) -> Result<String, CliError> {
    let dataset = match args.system {
        SynthSystem::CoupledAr => tscausal_core::gen_coupled_ar(
            args.n, args.a_x, args.a_y, args.c, args.noise_sd, args.seed,
        ),
        SynthSystem::CoupledMaps => tscausal_core::gen_coupled_maps(
            args.n, args.r_x, args.r_y, args.c_xy, args.c_yx, args.seed,
        ),
        SynthSystem::Confounded => tscausal_core::gen_confounded(
            args.n, args.lag_x, args.lag_y, args.noise_sd, args.seed,
        ),
    }
    .map_err(|e| CliError::Data(format!("generator: {e}")))?;

    let series = match args.decimate {
        Some(factor) => dataset
            .series
            .iter()
            .map(|s| tscausal_core::decimate(s, factor))
            .collect::<CoreResult<Vec<_>>>()
            .map_err(|e| CliError::Data(format!("decimation: {e}")))?,
        None => dataset.series.clone(),
    };

    write_csv(&args.output, &series)?;
    let truth = truth_path(&args.output);
    write_truth(&truth, &dataset.truth)?;
    Ok(format!(
        "wrote {} samples x {} series to {} (truth: {})",
        series.first().map(|s| s.len()).unwrap_or(0),
        series.len(),
        args.output.display(),
        truth.display()
    ))
}
