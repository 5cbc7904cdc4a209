//! Execution helpers shared by the numerical kernels.
//!
//! With the `parallel` feature (default) the maps run on the rayon pool;
//! without it they run sequentially. Reductions always split the input into
//! fixed-size chunks and combine the chunk sums in index order, so the
//! rounding pattern does not depend on the number of threads.

use num_complex::Complex64;

/// Chunk length used by every reduction.
pub const CHUNK: usize = 512;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(i)` for `i in 0..n`, collected in order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
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

/// Apply `f(index, item)` to every element.
pub fn for_each_indexed<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter_mut().enumerate().for_each(|(i, v)| f(i, v));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().enumerate().for_each(|(i, v)| f(i, v));
    }
}

/// Apply `f(row_index, row)` to consecutive rows of length `row_len`.
pub fn for_each_row<T, F>(items: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items
            .par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, r)| f(i, r));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.chunks_mut(row_len).enumerate().for_each(|(i, r)| f(i, r));
    }
}

/// Deterministic sum of `f(i)` over `0..n`.
pub fn sum_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    });
    partial.iter().sum()
}

/// Deterministic complex sum of `f(i)` over `0..n`.
pub fn sum_range_complex<F>(n: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).sum::<Complex64>()
    });
    partial.iter().sum()
}

/// Deterministic sum of fixed-width vectors `f(i)` over `0..n`.
pub fn sum_range_vec<const K: usize, F>(n: usize, f: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let partial = map_range(chunks, |c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        let mut acc = [0.0; K];
        for i in lo..hi {
            let v = f(i);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        acc
    });
    let mut total = [0.0; K];
    for p in &partial {
        for (a, x) in total.iter_mut().zip(p) {
            *a += x;
        }
    }
    total
}
