//! Deterministic chunked reductions.
//!
//! A range of work items is split into `threads` contiguous chunks whose
//! boundaries depend only on the item count and the thread count. Each chunk
//! is summed serially, then the chunk sums are combined by a fixed-shape
//! pairwise tree. The result is therefore bit-reproducible for a given thread
//! count, and `threads == 1` is the plain left-to-right sum.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::ZERO;

/// Splits `0..total` into `parts` contiguous ranges of near-equal size.
pub fn chunk_bounds(total: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1);
    (0..parts)
        .map(|c| (c * total / parts)..((c + 1) * total / parts))
        .collect()
}

/// Pairwise reduction with a shape fixed by `values.len()`.
pub fn tree_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => ZERO,
        1 => values[0],
        len => {
            let mid = len / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// Evaluates `chunk` on each range of the deterministic partition of `0..total`,
/// returning the results in range order.
pub fn chunked_map<T, F>(total: usize, threads: usize, chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync,
{
    if threads <= 1 || total < 2 {
        return vec![chunk(0..total)];
    }
    let bounds = chunk_bounds(total, threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build thread pool");
    pool.install(|| bounds.into_par_iter().map(&chunk).collect())
}

/// Sums `chunk(range)` over a deterministic partition of `0..total`.
pub fn chunked_sum<F>(total: usize, threads: usize, chunk: F) -> Complex64
where
    F: Fn(Range<usize>) -> Complex64 + Sync,
{
    tree_sum(&chunked_map(total, threads, chunk))
}
