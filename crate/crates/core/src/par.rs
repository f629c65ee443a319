//! Execution strategy for the data-parallel loops.
//!
//! `Exec::Parallel` runs on the rayon pool when the `parallel` feature is
//! enabled and silently falls back to sequential evaluation otherwise. Both
//! paths produce identical results: every reduction here is exact.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether this strategy actually runs on multiple threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub(crate) fn map_reduce<T, R, M, I, F>(
    exec: Exec,
    items: &[T],
    map: M,
    identity: I,
    reduce: F,
) -> R
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
    F: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() > 1 {
        return items.par_iter().map(map).reduce(identity, reduce);
    }
    let _ = exec;
    items.iter().map(map).fold(identity(), reduce)
}

/// Order-preserving parallel map.
pub(crate) fn map_collect<T, R, M>(exec: Exec, items: &[T], map: M) -> Vec<R>
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() > 1 {
        return items.par_iter().map(map).collect();
    }
    let _ = exec;
    items.iter().map(map).collect()
}
