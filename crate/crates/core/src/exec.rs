//! Execution helpers for the embarrassingly parallel inner loops (surrogate
//! ensembles, cross-map subsamples, window scans, Monte-Carlo trials).
//!
//! With the `parallel` feature (default) [`map_indexed`] fans jobs out over
//! rayon's thread pool; without it the same call runs sequentially. Results
//! are always collected in index order and every job derives its randomness
//! from `(master seed, index)`, so output is bit-identical regardless of
//! thread count or scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every index in `0..n`, in parallel when the `parallel`
/// feature is enabled. Results are returned in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential variant of [`map_indexed`], kept available so benchmarks
/// can compare the two strategies on identical workloads.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Derives an independent per-job seed from a master seed and a job index.
///
/// Uses the splitmix64 finalizer so that consecutive indices land far apart
/// in seed space. Pure function of its arguments: the same `(master, index)`
/// yields the same seed on every platform, which is what makes parallel and
/// sequential runs agree bit-for-bit.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
