//! Plug-in transfer entropy over symbol sequences.
//!
//! Transfer entropy from source `j` to target `i` measures how much the
//! source's recent past sharpens the transition probabilities of the target
//! beyond the target's own past:
//!
//! ```text
//! TE = sum p(i_next, i_hist, j_hist)
//!        * log2[ p(i_next | i_hist, j_hist) / p(i_next | i_hist) ]
//! ```
//!
//! Probabilities are raw empirical frequencies over all aligned
//! `(i_next, i_hist^(k), j_hist^(l))` triples, with `0 * log(0/x) = 0`. This
//! conditional form is the standard one: it is a Kullback-Leibler divergence,
//! hence nonnegative, and exactly zero whenever the empirical counts
//! factorize (conditional independence). No smoothing is applied; the
//! positive small-sample bias is handled by [`effective_te`], which subtracts
//! the mean statistic over source-shuffled surrogates.

use std::collections::HashMap;

use crate::error::{CausalityError, Result};
use crate::exec;
use crate::surrogate::{rearrange, SurrogateKind, MIN_SURROGATES};
use crate::symbolic::SymbolSequence;

/// History lengths for the transfer-entropy estimator.
///
/// `bins` is the alphabet used when a caller symbolizes continuous data
/// before estimation; the estimator itself works with whatever alphabets the
/// sequences carry. Results are always in bits (log base 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeConfig {
    /// Target history length `k >= 1`.
    pub k: usize,
    /// Source history length `l >= 1`.
    pub l: usize,
    /// Symbol alphabet for discretizing continuous inputs, `>= 2`.
    pub bins: u64,
}

impl Default for TeConfig {
    /// Smallest faithful setting: one past state each and four bins.
    fn default() -> Self {
        Self { k: 1, l: 1, bins: 4 }
    }
}

impl TeConfig {
    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.l < 1 {
            return Err(CausalityError::BadParameter(format!(
                "history lengths must be >= 1, got k={}, l={}",
                self.k, self.l
            )));
        }
        if self.bins < 2 {
            return Err(CausalityError::BadAlphabet {
                reason: format!("need at least 2 bins, got {}", self.bins),
            });
        }
        Ok(())
    }
}

/// Transfer entropy estimate, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct TeResult {
    /// Plug-in estimate; nonnegative up to floating-point error.
    pub te_bits: f64,
    /// Number of aligned triples the histogram was built from.
    pub n_triples: usize,
    /// Bias-corrected value `te_bits - surrogate_mean`; may be negative.
    /// `None` unless produced by [`effective_te`].
    pub effective_te_bits: Option<f64>,
    /// Mean statistic over source-shuffled surrogates.
    pub surrogate_mean: Option<f64>,
    /// Sample standard deviation of the surrogate statistics.
    pub surrogate_sd: Option<f64>,
}

/// Mixed-radix encoder for `(i_next, i_hist, j_hist)` keys.
struct TripleCoder {
    k: usize,
    l: usize,
    target_alphabet: u128,
    source_alphabet: u128,
    /// `target_alphabet ^ k`, the radix separating `i_next` from `i_hist`.
    target_hist_space: u128,
    /// `source_alphabet ^ l`, the radix separating target keys from `j_hist`.
    source_hist_space: u128,
}

impl TripleCoder {
    fn new(target: &SymbolSequence, source: &SymbolSequence, cfg: &TeConfig) -> Result<Self> {
        let ta = target.alphabet() as u128;
        let sa = source.alphabet() as u128;
        let target_hist_space = ta
            .checked_pow(cfg.k as u32)
            .filter(|s| ta.checked_mul(*s).is_some())
            .ok_or_else(|| {
                CausalityError::BadParameter(format!(
                    "state space {}^{} too large to enumerate",
                    ta, cfg.k
                ))
            })?;
        let source_hist_space = sa.checked_pow(cfg.l as u32).ok_or_else(|| {
            CausalityError::BadParameter(format!(
                "state space {}^{} too large to enumerate",
                sa, cfg.l
            ))
        })?;
        (ta * target_hist_space)
            .checked_mul(source_hist_space)
            .ok_or_else(|| {
                CausalityError::BadParameter(
                    "joint state space too large to enumerate".to_string(),
                )
            })?;
        Ok(Self {
            k: cfg.k,
            l: cfg.l,
            target_alphabet: ta,
            source_alphabet: sa,
            target_hist_space,
            source_hist_space,
        })
    }

    /// Encodes the `k` (resp. `l`) symbols immediately before time `t`.
    fn history(&self, symbols: &[u64], t: usize, len: usize, alphabet: u128) -> u128 {
        let mut code = 0u128;
        for d in 1..=len {
            code = code * alphabet + symbols[t - d] as u128;
        }
        code
    }

    fn keys(&self, target: &[u64], source: &[u64], t: usize) -> (u128, u128, u128, u128) {
        let i_next = target[t] as u128;
        let i_hist = self.history(target, t, self.k, self.target_alphabet);
        let j_hist = self.history(source, t, self.l, self.source_alphabet);
        let key_ik = i_hist;
        let key_ip_ik = i_next * self.target_hist_space + i_hist;
        let key_ikjl = i_hist * self.source_hist_space + j_hist;
        let key_full = key_ip_ik * self.source_hist_space + j_hist;
        (key_full, key_ik, key_ip_ik, key_ikjl)
    }
}

/// Plug-in transfer entropy from `source` to `target`, in bits.
///
/// Requires aligned sequences with length at least `max(k, l) + 2` so that
/// the histogram holds at least two triples. Runs in one pass over the data;
/// all four marginal counts come from the same sample window.
pub fn transfer_entropy(
    target: &SymbolSequence,
    source: &SymbolSequence,
    cfg: &TeConfig,
) -> Result<TeResult> {
    cfg.validate()?;
    if target.len() != source.len() {
        return Err(CausalityError::LengthMismatch {
            left: target.len(),
            right: source.len(),
        });
    }
    let n = target.len();
    let hist = cfg.k.max(cfg.l);
    if n < hist + 2 {
        return Err(CausalityError::TooShort {
            needed: hist + 2,
            actual: n,
        });
    }
    let coder = TripleCoder::new(target, source, cfg)?;

    let mut full: HashMap<u128, u64> = HashMap::new();
    let mut ik: HashMap<u128, u64> = HashMap::new();
    let mut ip_ik: HashMap<u128, u64> = HashMap::new();
    let mut ikjl: HashMap<u128, u64> = HashMap::new();
    let ts = target.symbols();
    let ss = source.symbols();
    for t in hist..n {
        let (key_full, key_ik, key_ip_ik, key_ikjl) = coder.keys(ts, ss, t);
        *full.entry(key_full).or_insert(0) += 1;
        *ik.entry(key_ik).or_insert(0) += 1;
        *ip_ik.entry(key_ip_ik).or_insert(0) += 1;
        *ikjl.entry(key_ikjl).or_insert(0) += 1;
    }
    let n_triples = n - hist;

    // Sum in deterministic key order so repeated runs are bit-identical.
    let mut cells: Vec<(&u128, &u64)> = full.iter().collect();
    cells.sort_unstable_by_key(|(k, _)| **k);
    let mut te_bits = 0.0;
    for (key_full, &c_full) in cells {
        // Decompose the full key back into its marginal keys.
        let j_hist = key_full % coder.source_hist_space;
        let key_ip_ik = key_full / coder.source_hist_space;
        let i_hist = key_ip_ik % coder.target_hist_space;
        let key_ikjl = i_hist * coder.source_hist_space + j_hist;
        let c_ik = ik[&i_hist];
        let c_ip_ik = ip_ik[&key_ip_ik];
        let c_ikjl = ikjl[&key_ikjl];
        // Counts are exact integers well below 2^53, so the ratio is exact
        // whenever the empirical distribution factorizes, making TE = 0
        // exact under empirical independence.
        let ratio = (c_full as f64 * c_ik as f64) / (c_ikjl as f64 * c_ip_ik as f64);
        te_bits += (c_full as f64 / n_triples as f64) * ratio.log2();
    }

    Ok(TeResult {
        te_bits,
        n_triples,
        effective_te_bits: None,
        surrogate_mean: None,
        surrogate_sd: None,
    })
}

/// Bias-corrected transfer entropy: the raw statistic minus its mean over
/// source-shuffled surrogates.
///
/// Shuffling the source destroys its temporal relation to the target while
/// keeping both marginals, so the surrogate mean estimates the finite-sample
/// bias of the plug-in statistic. Surrogate `i` is deterministic in
/// `(seed, i)`; the ensemble is evaluated concurrently under the `parallel`
/// feature with order-independent results.
pub fn effective_te(
    target: &SymbolSequence,
    source: &SymbolSequence,
    cfg: &TeConfig,
    n_surrogates: usize,
    seed: u64,
) -> Result<TeResult> {
    if n_surrogates < MIN_SURROGATES {
        return Err(CausalityError::BadParameter(format!(
            "need at least {MIN_SURROGATES} surrogates, got {n_surrogates}"
        )));
    }
    let mut result = transfer_entropy(target, source, cfg)?;
    let nulls: Vec<f64> = exec::map_indexed(n_surrogates, |i| {
        let mut symbols = source.symbols().to_vec();
        rearrange(&mut symbols, SurrogateKind::Shuffle, seed, i);
        let shuffled = SymbolSequence::new(symbols, source.alphabet())
            .expect("permutation preserves the alphabet");
        transfer_entropy(target, &shuffled, cfg).map(|r| r.te_bits)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mean = nulls.iter().sum::<f64>() / n_surrogates as f64;
    let sd = (nulls.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (n_surrogates - 1) as f64)
        .sqrt();
    result.effective_te_bits = Some(result.te_bits - mean);
    result.surrogate_mean = Some(mean);
    result.surrogate_sd = Some(sd);
    Ok(result)
}
