//! Deterministic parallel reductions.
//!
//! Work is split into fixed-size chunks whose partial results are combined by
//! a pairwise tree in chunk order, so sums are bit-identical for any number of
//! worker threads.

use std::sync::OnceLock;

use rayon::prelude::*;

const CHUNK: usize = 256;

/// Worker pool, capped by `MATCHLAB_THREADS` when set.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("MATCHLAB_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("thread pool")
    })
}

/// Sum `f(i)` over `0..count`, where each call adds into a vector of `width`.
pub fn indexed_sum<F>(count: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let chunks = count.div_ceil(CHUNK);
    let partials: Vec<Vec<f64>> = pool().install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![0.0; width];
                for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                    f(i, &mut acc);
                }
                acc
            })
            .collect()
    });
    pairwise(&partials, width)
}

/// Evaluate `f` on `0..count` in parallel, results in index order.
pub fn indexed_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    pool().install(|| (0..count).into_par_iter().map(f).collect())
}

pub fn pairwise(parts: &[Vec<f64>], width: usize) -> Vec<f64> {
    match parts.len() {
        0 => vec![0.0; width],
        1 => parts[0].clone(),
        n => {
            let (a, b) = parts.split_at(n / 2);
            let mut left = pairwise(a, width);
            for (x, y) in left.iter_mut().zip(pairwise(b, width)) {
                *x += y;
            }
            left
        }
    }
}

/// Pairwise sum of scalars.
pub fn pairwise_scalar(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_scalar(a) + pairwise_scalar(b)
        }
    }
}
