//! Data-parallel map helpers. With the `parallel` feature the mapped
//! closures fan out over rayon; without it the same API degrades to a
//! sequential loop so results are bitwise identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over items, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential twin of [`par_map`], kept for benchmarking the
/// parallel speedup and for deterministic debugging.
pub fn seq_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
