//! Pluggable mapping over independent work items (paths, neighbours, boxes).

use alloc::vec::Vec;

/// Runs `f(0..n)` and returns the results in index order.
///
/// Implementations may evaluate in parallel but must aggregate
/// deterministically.
pub trait Executor: Sync {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
