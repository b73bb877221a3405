//! Data-parallel helpers.
//!
//! Every parallel map in the crate goes through [`map_indices`], which keeps
//! the output in index order so parallel and sequential runs produce
//! bit-identical results. Reductions happen afterwards, sequentially.

use serde::{Deserialize, Serialize};

/// How batch work is scheduled.
///
/// `Parallel` silently degrades to sequential execution when the crate is
/// built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
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
    /// True when work will actually run on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0), f(1), …, f(len-1)` and returns the results in order.
pub fn map_indices<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Fallible variant of [`map_indices`]; the first error in index order wins.
pub fn try_map_indices<T, E, F>(len: usize, exec: Execution, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indices(len, exec, f).into_iter().collect()
}
