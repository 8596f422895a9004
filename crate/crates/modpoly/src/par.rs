//! Thin adapters that run a map over an index range either on rayon (feature
//! `parallel`, default) or sequentially. Callers pass a threshold so small
//! inputs skip the thread-pool handoff.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `lo..hi`, collecting in order.
#[cfg(feature = "parallel")]
pub fn range_map<U, F>(lo: usize, hi: usize, threshold: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    if hi.saturating_sub(lo) < threshold {
        (lo..hi).map(f).collect()
    } else {
        (lo..hi).into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn range_map<U, F>(lo: usize, hi: usize, _threshold: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (lo..hi).map(f).collect()
}

/// Map `f` over a slice, collecting in order.
#[cfg(feature = "parallel")]
pub fn slice_map<T, U, F>(items: &[T], threshold: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    if items.len() < threshold {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn slice_map<T, U, F>(items: &[T], _threshold: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}
