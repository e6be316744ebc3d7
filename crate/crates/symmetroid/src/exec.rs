//! Thread-pool executor.

use rayon::prelude::*;
use symmetroid_core::Executor;

/// Maps work items over a private rayon pool; one thread means plain
/// sequential evaluation. Results are always in index order.
pub struct Pool {
    inner: Option<rayon::ThreadPool>,
}

impl Pool {
    /// `threads = 0` uses one thread per core.
    pub fn new(threads: usize) -> Pool {
        if threads == 1 || (threads == 0 && rayon::current_num_threads() == 1) {
            return Pool { inner: None };
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        Pool { inner: Some(pool) }
    }

    pub fn sequential() -> Pool {
        Pool { inner: None }
    }

    pub fn threads(&self) -> usize {
        self.inner.as_ref().map_or(1, |p| p.current_num_threads())
    }
}

impl Executor for Pool {
    fn map_indexed<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match &self.inner {
            None => (0..n).map(f).collect(),
            Some(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        }
    }
}
