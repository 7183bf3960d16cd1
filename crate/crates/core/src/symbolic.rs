//! Symbolization and an effort-to-compress complexity estimate.
//!
//! Continuous series are discretized with equal-width bins. Complexity of a
//! symbol sequence is measured by non-sequential recursive pair substitution:
//! repeatedly replace the most frequent adjacent symbol pair with a fresh
//! symbol until the sequence is homogeneous (or a single symbol). The number
//! of substitution passes is the effort to compress.
//!
//! The substitution rules are pinned precisely because every downstream
//! number depends on them:
//!
//! * Pair occurrences are counted left to right without overlap, so the run
//!   `[1, 1, 1]` contains one `(1, 1)` pair, not two.
//! * Frequency ties go to the pair whose first occurrence is leftmost, then
//!   to the lexicographically smaller pair.
//! * The fresh symbol for each pass is `max(symbol) + 1`.
//! * Replacement is greedy left to right.
//!
//! Joint complexity of two aligned sequences uses the bijective pair code
//! `a_i * B_b + b_i` (where `B_b` is the second alphabet size), so the joint
//! complexity of a sequence with itself equals its own complexity exactly.

use std::collections::HashMap;

use crate::error::{CausalityError, Result};
use crate::series::TimeSeries;

/// A discrete sequence over the alphabet `0..alphabet`.
///
/// Invariant: every symbol is strictly below `alphabet`, and `alphabet >= 2`.
/// Substitution passes may introduce larger working symbols internally, but
/// those never escape into a `SymbolSequence`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u64>,
    alphabet: u64,
}

impl SymbolSequence {
    /// Builds a sequence, checking that every symbol fits the alphabet.
    pub fn new(symbols: Vec<u64>, alphabet: u64) -> Result<Self> {
        if alphabet < 2 {
            return Err(CausalityError::BadAlphabet {
                reason: format!("alphabet size must be >= 2, got {alphabet}"),
            });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(CausalityError::BadAlphabet {
                reason: format!("symbol {bad} outside alphabet 0..{alphabet}"),
            });
        }
        Ok(Self { symbols, alphabet })
    }

    /// Internal constructor for windows and concatenations whose invariants
    /// are guaranteed by the caller.
    pub(crate) fn from_parts(symbols: Vec<u64>, alphabet: u64) -> Self {
        debug_assert!(alphabet >= 2 && symbols.iter().all(|&s| s < alphabet));
        Self { symbols, alphabet }
    }

    /// The symbols, oldest first.
    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    /// Exclusive upper bound on the symbols.
    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// True when the sequence holds no symbols.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Concatenation `self ++ other`; the alphabet is the larger of the two.
    pub fn concat(&self, other: &SymbolSequence) -> SymbolSequence {
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        SymbolSequence::from_parts(symbols, self.alphabet.max(other.alphabet))
    }

    /// A contiguous window `[start, start + len)` of this sequence.
    pub(crate) fn window(&self, start: usize, len: usize) -> SymbolSequence {
        SymbolSequence::from_parts(self.symbols[start..start + len].to_vec(), self.alphabet)
    }
}

/// Discretizes a series into `bins` equal-width bins spanning `[min, max]`.
///
/// Bins are half-open except the last, which is closed so the maximum maps
/// to symbol `bins - 1`. The mapping is invariant under positive affine
/// transforms of the data. Errors on `bins < 2` or a constant series (whose
/// range is empty).
pub fn symbolize(x: &TimeSeries, bins: u64) -> Result<SymbolSequence> {
    if bins < 2 {
        return Err(CausalityError::BadAlphabet {
            reason: format!("need at least 2 bins, got {bins}"),
        });
    }
    let values = x.values();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Err(CausalityError::ConstantSeries {
            name: x.name().to_string(),
        });
    }
    let span = max - min;
    let symbols = values
        .iter()
        .map(|&v| ((((v - min) / span) * bins as f64).floor() as u64).min(bins - 1))
        .collect();
    Ok(SymbolSequence {
        symbols,
        alphabet: bins,
    })
}

/// Result of the effort-to-compress estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtcResult {
    /// Number of substitution passes until the sequence is homogeneous.
    pub iterations: usize,
    /// `iterations / (len - 1)`, in `[0, 1]`; zero for length <= 1.
    pub normalized: f64,
}

/// Statistics for one adjacent pair during a counting pass.
struct PairStat {
    count: usize,
    first: usize,
    last_counted: usize,
}

fn homogeneous(s: &[u64]) -> bool {
    s.windows(2).all(|w| w[0] == w[1])
}

/// Runs substitution passes until the working sequence is homogeneous or a
/// single symbol, returning the pass count.
fn substitution_passes(mut s: Vec<u64>) -> usize {
    let mut passes = 0;
    while s.len() > 1 && !homogeneous(&s) {
        let mut stats: HashMap<(u64, u64), PairStat> = HashMap::new();
        for i in 0..s.len() - 1 {
            let key = (s[i], s[i + 1]);
            match stats.get_mut(&key) {
                Some(st) => {
                    // Greedy non-overlap: an occurrence starting right after
                    // a counted one (possible only for (a, a) pairs inside a
                    // run) is not counted again.
                    if st.last_counted + 1 == i {
                        continue;
                    }
                    st.count += 1;
                    st.last_counted = i;
                }
                None => {
                    stats.insert(
                        key,
                        PairStat {
                            count: 1,
                            first: i,
                            last_counted: i,
                        },
                    );
                }
            }
        }
        let (&winner, _) = stats
            .iter()
            .min_by_key(|(pair, st)| (std::cmp::Reverse(st.count), st.first, **pair))
            .expect("a non-homogeneous sequence of length >= 2 has at least one pair");

        let fresh = s.iter().copied().max().expect("sequence is non-empty") + 1;
        let mut out = Vec::with_capacity(s.len());
        let mut i = 0;
        while i < s.len() {
            if i + 1 < s.len() && (s[i], s[i + 1]) == winner {
                out.push(fresh);
                i += 2;
            } else {
                out.push(s[i]);
                i += 1;
            }
        }
        s = out;
        passes += 1;
    }
    passes
}

fn etc_result(iterations: usize, input_len: usize) -> EtcResult {
    let normalized = if input_len > 1 {
        iterations as f64 / (input_len - 1) as f64
    } else {
        0.0
    };
    EtcResult {
        iterations,
        normalized,
    }
}

/// Effort to compress: substitution passes until homogeneous, plus the
/// pass count normalized by `len - 1`.
///
/// Total on all sequences: homogeneous input (including length <= 1) needs
/// zero passes, and each pass shortens the sequence by at least one symbol,
/// so `iterations <= len - 1` and the normalized value sits in `[0, 1]`.
pub fn etc(s: &SymbolSequence) -> EtcResult {
    etc_result(substitution_passes(s.symbols.clone()), s.len())
}

/// Joint effort to compress two aligned sequences.
///
/// Pairs are encoded bijectively as `a_i * B_b + b_i` with `B_b` the second
/// alphabet size, then compressed like any other sequence. The encoding is
/// order-preserving and collision-free, which makes
/// `etc_joint(s, s) == etc(s)` hold exactly.
pub fn etc_joint(a: &SymbolSequence, b: &SymbolSequence) -> Result<EtcResult> {
    if a.len() != b.len() {
        return Err(CausalityError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.alphabet.checked_mul(b.alphabet).is_none() {
        return Err(CausalityError::BadAlphabet {
            reason: format!(
                "joint alphabet {} x {} overflows",
                a.alphabet, b.alphabet
            ),
        });
    }
    let joint: Vec<u64> = a
        .symbols
        .iter()
        .zip(&b.symbols)
        .map(|(&ai, &bi)| ai * b.alphabet + bi)
        .collect();
    Ok(etc_result(substitution_passes(joint), a.len()))
}
