//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) the heavy sweeps run on the rayon
//! pool. Without it, or with [`Execution::Sequential`], the same closures run
//! on the calling thread. Results are identical either way: every reduction
//! is over exact values and collected in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a sweep is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..n).map(f).collect()` in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Smallest index in `0..n` for which `f` yields `Some`, with its value.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n)
                .into_par_iter()
                .find_map_first(|k| f(k).map(|v| (k, v)));
        }
        (0..n).find_map(|k| f(k).map(|v| (k, v)))
    }

    /// Collects every `Some` produced over `0..n`, in index order.
    pub fn filter_map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().filter_map(f).collect();
        }
        (0..n).filter_map(f).collect()
    }
}

/// Lattice sizes below this stay sequential even in parallel mode.
pub(crate) const PARALLEL_THRESHOLD: usize = 1 << 12;

/// Picks parallel execution only when the work is large enough to pay off.
pub(crate) fn for_size(n: usize) -> Execution {
    if n >= PARALLEL_THRESHOLD {
        Execution::default()
    } else {
        Execution::Sequential
    }
}
