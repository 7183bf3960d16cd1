//! Cross mapping on delay-coordinate reconstructions.
//!
//! For coupled deterministic dynamics, a delay embedding of one observable
//! reconstructs the joint attractor, so the states of a driving variable can
//! be recovered from the embedded manifold of the driven one. The directed
//! evidence "x drives y" is therefore: predict x from y's manifold using
//! simplex-style nearest-neighbor weights, and require the prediction skill
//! to *converge* (improve) as the library of manifold points grows.
//!
//! Conventions fixed here: E+1 neighbors; exponential weights
//! `exp(-d_i / d_min)` normalized to a probability vector, with equal weight
//! sharing among exact-distance-zero neighbors; neighbor ties broken toward
//! the lower time index; a query point never serves as its own neighbor, but
//! temporally adjacent points are allowed (no exclusion window); libraries
//! are drawn uniformly without replacement from a seeded generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlation::pearson_correlation;
use crate::error::{CausalityError, Result};
use crate::exec;
use crate::series::TimeSeries;

/// Default embedding dimension.
pub const DEFAULT_EMBED_DIM: usize = 3;
/// Default embedding delay.
pub const DEFAULT_DELAY: usize = 1;
/// Default convergence margin: terminal mean skill must beat initial mean
/// skill by at least this much.
pub const DEFAULT_CONV_MARGIN: f64 = 0.1;

/// A delay-coordinate reconstruction of a scalar series.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    embedding_dim: usize,
    delay: usize,
    /// Row-major point buffer: point `i` occupies
    /// `coords[i*E .. (i+1)*E]` as `(y_m, y_{m-tau}, ..., y_{m-(E-1)tau})`.
    coords: Vec<f64>,
    /// Time index of each point's leading coordinate.
    origin_index: Vec<usize>,
    /// Length of the series the manifold was built from.
    source_len: usize,
}

impl Manifold {
    /// Embedding dimension `E`.
    pub fn embedding_dim(&self) -> usize {
        self.embedding_dim
    }

    /// Embedding delay `tau`.
    pub fn delay(&self) -> usize {
        self.delay
    }

    /// Number of reconstructed points, `n - (E-1) * tau`.
    pub fn n_points(&self) -> usize {
        self.origin_index.len()
    }

    /// Coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.embedding_dim..(i + 1) * self.embedding_dim]
    }

    /// Time index of point `i`'s leading coordinate.
    pub fn origin_index(&self, i: usize) -> usize {
        self.origin_index[i]
    }

    fn distance_sq(&self, a: usize, b: usize) -> f64 {
        self.point(a)
            .iter()
            .zip(self.point(b))
            .map(|(u, v)| (u - v) * (u - v))
            .sum()
    }

    /// The `count` nearest points to `query` among `library`, by Euclidean
    /// distance, ties broken toward the lower point index (equivalently the
    /// lower time index). `query` itself is skipped when it appears in the
    /// library. Returns point indices ordered nearest-first.
    pub fn nearest_neighbors(&self, library: &[usize], query: usize, count: usize) -> Vec<usize> {
        // Incremental top-k: a small sorted buffer of (distance^2, index),
        // deliberately a different route than the full-sort oracle used in
        // tests.
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(count + 1);
        for &cand in library {
            if cand == query {
                continue;
            }
            let d2 = self.distance_sq(query, cand);
            let entry = (d2, cand);
            if best.len() == count {
                let worst = *best.last().expect("buffer is non-empty");
                if (entry.0, entry.1) >= (worst.0, worst.1) {
                    continue;
                }
            }
            let pos = best.partition_point(|&(d, i)| (d, i) < (entry.0, entry.1));
            best.insert(pos, entry);
            if best.len() > count {
                best.pop();
            }
        }
        best.into_iter().map(|(_, i)| i).collect()
    }
}

/// Builds the delay embedding of `y` with dimension `E` and delay `tau`.
///
/// Point `m` is `(y_m, y_{m-tau}, ..., y_{m-(E-1)tau})` for
/// `m = (E-1)*tau .. n-1`; with `E = 1` the points are the raw samples.
/// Requires at least two points.
pub fn delay_embed(y: &TimeSeries, embedding_dim: usize, delay: usize) -> Result<Manifold> {
    if embedding_dim < 1 || delay < 1 {
        return Err(CausalityError::BadEmbedding {
            dim: embedding_dim,
            delay,
        });
    }
    let n = y.len();
    let offset = (embedding_dim - 1) * delay;
    if n < offset + 2 {
        return Err(CausalityError::TooShort {
            needed: offset + 2,
            actual: n,
        });
    }
    let values = y.values();
    let n_points = n - offset;
    let mut coords = Vec::with_capacity(n_points * embedding_dim);
    let mut origin_index = Vec::with_capacity(n_points);
    for m in offset..n {
        for d in 0..embedding_dim {
            coords.push(values[m - d * delay]);
        }
        origin_index.push(m);
    }
    Ok(Manifold {
        embedding_dim,
        delay,
        coords,
        origin_index,
        source_len: n,
    })
}

/// Cross-map estimate quality for one library draw.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMapResult {
    /// Pearson correlation between true and cross-mapped values on the
    /// prediction set.
    pub skill: f64,
    /// Library size used.
    pub library_length: usize,
    /// Number of predicted points.
    pub n_predictions: usize,
}

/// Cross-maps `x` from a manifold built on the other series.
///
/// Draws `library_length` manifold points uniformly without replacement
/// (deterministic in `seed`), predicts every non-library point from its
/// `E+1` nearest library neighbors, and correlates predictions with truth.
/// When the library is the whole manifold, every point is predicted
/// leave-one-out instead, so the full-library skill remains defined.
///
/// Degenerate cases are surfaced, not zeroed: an all-identical library is an
/// error, and a constant truth or prediction vector propagates the
/// zero-variance error from the correlation.
pub fn cross_map_skill(
    x: &TimeSeries,
    source_manifold: &Manifold,
    library_length: usize,
    seed: u64,
) -> Result<CrossMapResult> {
    let m = source_manifold;
    if x.len() != m.source_len {
        return Err(CausalityError::LengthMismatch {
            left: x.len(),
            right: m.source_len,
        });
    }
    let n_points = m.n_points();
    let n_neighbors = m.embedding_dim() + 1;
    if library_length < n_neighbors + 1 {
        return Err(CausalityError::TooShort {
            needed: n_neighbors + 1,
            actual: library_length,
        });
    }
    if library_length > n_points {
        return Err(CausalityError::TooShort {
            needed: library_length,
            actual: n_points,
        });
    }

    // Partial Fisher-Yates: the first `library_length` entries are a uniform
    // draw without replacement. Sorted afterwards so neighbor scans run in
    // ascending time order.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n_points).collect();
    for i in 0..library_length {
        let j = rng.random_range(i..n_points);
        indices.swap(i, j);
    }
    let mut library = indices[..library_length].to_vec();
    library.sort_unstable();

    if library
        .iter()
        .all(|&i| m.point(i) == m.point(library[0]))
    {
        return Err(CausalityError::DegenerateLibrary {
            n_points: library_length,
        });
    }

    let mut in_library = vec![false; n_points];
    for &i in &library {
        in_library[i] = true;
    }
    // Full library: fall back to leave-one-out over all points.
    let queries: Vec<usize> = if library_length == n_points {
        (0..n_points).collect()
    } else {
        (0..n_points).filter(|&i| !in_library[i]).collect()
    };
    if queries.len() < 2 {
        return Err(CausalityError::TooShort {
            needed: 2,
            actual: queries.len(),
        });
    }

    let xv = x.values();
    let mut truths = Vec::with_capacity(queries.len());
    let mut estimates = Vec::with_capacity(queries.len());
    for &q in &queries {
        let neighbors = m.nearest_neighbors(&library, q, n_neighbors);
        let dists: Vec<f64> = neighbors
            .iter()
            .map(|&i| m.distance_sq(q, i).sqrt())
            .collect();
        let d_min = dists[0];
        let weights: Vec<f64> = if d_min == 0.0 {
            // Continuous limit of the exponential kernel: exact matches
            // share all the weight equally.
            let zeros = dists.iter().filter(|&&d| d == 0.0).count() as f64;
            dists
                .iter()
                .map(|&d| if d == 0.0 { 1.0 / zeros } else { 0.0 })
                .collect()
        } else {
            let raw: Vec<f64> = dists.iter().map(|&d| (-d / d_min).exp()).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|&w| w / total).collect()
        };
        debug_assert!(
            (weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
            "neighbor weights must form a probability vector"
        );
        let estimate: f64 = neighbors
            .iter()
            .zip(&weights)
            .map(|(&i, &w)| w * xv[m.origin_index(i)])
            .sum();
        truths.push(xv[m.origin_index(q)]);
        estimates.push(estimate);
    }

    let truth_series = TimeSeries::new(x.name(), truths)?;
    let estimate_series = TimeSeries::new("cross_map_estimate", estimates)?;
    let skill = pearson_correlation(&truth_series, &estimate_series)?.rho;
    Ok(CrossMapResult {
        skill,
        library_length,
        n_predictions: queries.len(),
    })
}

/// Mean cross-map skill as a function of library length, one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCurve {
    /// Library sizes, strictly increasing.
    pub library_lengths: Vec<usize>,
    /// Mean skill over subsamples, aligned with `library_lengths`.
    pub mean_skill: Vec<f64>,
    /// Library draws averaged per length.
    pub n_subsamples: usize,
    /// True when terminal skill beats initial skill by more than the margin
    /// AND the skill trend over length is positive by Spearman rank.
    pub converged: bool,
}

/// Both directed convergence curves for a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CcmConvergence {
    /// Skill of recovering `x` from the manifold of `y`: evidence that x
    /// drives y.
    pub x_to_y: ConvergenceCurve,
    /// Skill of recovering `y` from the manifold of `x`: evidence that y
    /// drives x.
    pub y_to_x: ConvergenceCurve,
}

/// Ranks with average ties, then Pearson correlation of the ranks. Returns
/// zero when either side has no variation.
fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let n = v.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; n];
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && v[order[j + 1]] == v[order[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &order[i..=j] {
                out[k] = avg;
            }
            i = j + 1;
        }
        out
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let mx = rx.iter().sum::<f64>() / rx.len() as f64;
    let my = ry.iter().sum::<f64>() / ry.len() as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

fn curve(lengths: &[usize], mean_skill: Vec<f64>, n_subsamples: usize, margin: f64) -> ConvergenceCurve {
    let converged = if lengths.len() < 2 {
        false
    } else {
        let gain = mean_skill.last().unwrap() - mean_skill.first().unwrap();
        let lens: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
        gain > margin && spearman(&lens, &mean_skill) > 0.0
    };
    ConvergenceCurve {
        library_lengths: lengths.to_vec(),
        mean_skill,
        n_subsamples,
        converged,
    }
}

/// Cross-map convergence for both directions of a pair.
///
/// For every library length, skill is averaged over `n_subsamples` seeded
/// library draws; each (direction, length, subsample) job derives its own
/// seed from the master seed, so results are independent of evaluation
/// order and identical across thread counts.
#[allow(clippy::too_many_arguments)]
pub fn ccm_convergence(
    x: &TimeSeries,
    y: &TimeSeries,
    embedding_dim: usize,
    delay: usize,
    lengths: &[usize],
    n_subsamples: usize,
    conv_margin: f64,
    seed: u64,
) -> Result<CcmConvergence> {
    if x.len() != y.len() {
        return Err(CausalityError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CausalityError::BadParameter(
            "library lengths must be non-empty and strictly increasing".to_string(),
        ));
    }
    if n_subsamples < 5 {
        return Err(CausalityError::BadParameter(format!(
            "need at least 5 library subsamples, got {n_subsamples}"
        )));
    }
    let manifold_y = delay_embed(y, embedding_dim, delay)?;
    let manifold_x = delay_embed(x, embedding_dim, delay)?;
    let n_points = manifold_y.n_points();
    if *lengths.last().unwrap() > n_points {
        return Err(CausalityError::TooShort {
            needed: *lengths.last().unwrap(),
            actual: n_points,
        });
    }

    let n_lengths = lengths.len();
    let jobs = 2 * n_lengths * n_subsamples;
    let skills: Vec<Result<f64>> = exec::map_indexed(jobs, |job| {
        let direction = job / (n_lengths * n_subsamples);
        let rest = job % (n_lengths * n_subsamples);
        let li = rest / n_subsamples;
        let (target, manifold) = if direction == 0 {
            (x, &manifold_y)
        } else {
            (y, &manifold_x)
        };
        cross_map_skill(target, manifold, lengths[li], exec::derive_seed(seed, job as u64))
            .map(|r| r.skill)
    });
    let skills: Vec<f64> = skills.into_iter().collect::<Result<Vec<_>>>()?;

    let mean_for = |direction: usize| -> Vec<f64> {
        (0..n_lengths)
            .map(|li| {
                let base = direction * n_lengths * n_subsamples + li * n_subsamples;
                skills[base..base + n_subsamples].iter().sum::<f64>() / n_subsamples as f64
            })
            .collect()
    };
    Ok(CcmConvergence {
        x_to_y: curve(lengths, mean_for(0), n_subsamples, conv_margin),
        y_to_x: curve(lengths, mean_for(1), n_subsamples, conv_margin),
    })
}
