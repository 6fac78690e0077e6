//! Deterministic summation.
//!
//! Long sums are cut into fixed chunks of [`CHUNK`] terms, each chunk is
//! summed left to right, and the chunk partials are combined by a balanced
//! pairwise tree. The tree depends only on the length, so a sum is bit-stable
//! whether or not the chunks are computed in parallel.

use alloc::vec::Vec;
use core::ops::Add;

/// Terms per leaf of the summation tree.
pub const CHUNK: usize = 1 << 15;

fn tree<T: Copy + Default + Add<Output = T>>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            tree(lo) + tree(hi)
        }
    }
}

fn chunk_partial<T, F>(start: usize, end: usize, f: &F) -> T
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(usize) -> T,
{
    let mut acc = T::default();
    for i in start..end {
        acc = acc + f(i);
    }
    acc
}

/// `Σ_{i < len} f(i)` with the fixed chunk/pairwise tree.
#[cfg(not(feature = "parallel"))]
pub fn sum_by<T, F>(len: usize, f: F) -> T
where
    T: Copy + Default + Add<Output = T> + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let partials: Vec<T> = (0..len.div_ceil(CHUNK))
        .map(|c| chunk_partial(c * CHUNK, ((c + 1) * CHUNK).min(len), &f))
        .collect();
    tree(&partials)
}

/// `Σ_{i < len} f(i)` with the fixed chunk/pairwise tree.
#[cfg(feature = "parallel")]
pub fn sum_by<T, F>(len: usize, f: F) -> T
where
    T: Copy + Default + Add<Output = T> + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let partials: Vec<T> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| chunk_partial(c * CHUNK, ((c + 1) * CHUNK).min(len), &f))
        .collect();
    tree(&partials)
}

pub fn sum(xs: &[f64]) -> f64 {
    sum_by(xs.len(), |i| xs[i])
}

/// `(0..len).map(f).collect()`, in parallel when the feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// `(0..len).map(f).collect()`, in parallel when the feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_short() {
        assert_eq!(sum(&[]), 0.0);
        assert_eq!(sum(&[1.5, 2.5]), 4.0);
    }

    #[test]
    fn long_sum_is_exact_on_integers() {
        let n = 3 * CHUNK + 17;
        let s = sum_by(n, |i| i as f64);
        assert_eq!(s, (n * (n - 1) / 2) as f64);
    }
}
