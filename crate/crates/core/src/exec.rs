//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the `Parallel` strategy runs on the rayon
//! global pool; without it every strategy runs sequentially. Results never
//! depend on the strategy: all reductions are order-independent or collected
//! in index order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

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
}

/// `f` over every index of `range`, collected in index order.
pub(crate) fn map_range<T, F>(exec: Execution, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// `f` over every element of `items`, collected in order.
pub(crate) fn map_slice<S, T, F>(exec: Execution, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Fold every index of `range` into an accumulator and merge the partials.
pub(crate) fn fold_range<A, F, M>(exec: Execution, range: Range<u64>, init: A, f: F, merge: M) -> A
where
    A: Send + Clone + Sync,
    F: Fn(&mut A, u64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range
            .into_par_iter()
            .fold(
                || init.clone(),
                |mut acc, i| {
                    f(&mut acc, i);
                    acc
                },
            )
            .reduce(|| init.clone(), &merge);
    }
    let _ = (exec, &merge);
    let mut acc = init;
    for i in range {
        f(&mut acc, i);
    }
    acc
}
