//! Sample-grid execution: rayon data-parallel maps with a sequential
//! fallback.
//!
//! With the `parallel` feature (default) the indexed maps run on the rayon
//! global pool; without it they degrade to plain loops. The `_seq` variants
//! are always sequential so benchmarks can compare both paths. Results are
//! collected in index order either way, so outputs are deterministic and
//! independent of the thread count.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, in parallel when available.
#[cfg(feature = "parallel")]
pub fn map_range<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, in parallel when available.
#[cfg(not(feature = "parallel"))]
pub fn map_range<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    map_range_seq(n, f)
}

/// Fallible map over `0..n`, in parallel when available; the first error wins.
#[cfg(feature = "parallel")]
pub fn try_map_range<U: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    (0..n).into_par_iter().map(f).collect()
}

/// Fallible map over `0..n`, in parallel when available; the first error wins.
#[cfg(not(feature = "parallel"))]
pub fn try_map_range<U: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    try_map_range_seq(n, f)
}

/// Always-sequential map over `0..n`.
pub fn map_range_seq<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Always-sequential fallible map over `0..n`.
pub fn try_map_range_seq<U>(n: usize, f: impl Fn(usize) -> Result<U>) -> Result<Vec<U>> {
    (0..n).map(f).collect()
}

/// Caps the rayon global pool at `threads` workers (0 keeps the default).
/// Must run before the pool's first use; later calls report an error string.
#[cfg(feature = "parallel")]
pub fn configure_thread_pool(threads: usize) -> std::result::Result<(), String> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Without the `parallel` feature there is no pool to configure.
#[cfg(not(feature = "parallel"))]
pub fn configure_thread_pool(_threads: usize) -> std::result::Result<(), String> {
    Ok(())
}
