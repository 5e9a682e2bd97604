//! Batch execution helpers.
//!
//! With the `parallel` feature (on by default) these fan work out across a
//! rayon thread pool; without it they run the same closures sequentially.
//! Callers must pass order-insensitive merge functions, so both modes produce
//! identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Fold `items` into accumulators and merge them pairwise. `merge` must be
/// associative and commutative with `init()` as identity.
#[cfg(feature = "parallel")]
pub(crate) fn fold_merge<T, A, I, F, M>(items: &[T], init: I, fold: F, merge: M) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &T) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    items.par_iter().fold(&init, fold).reduce(&init, merge)
}

/// Fold `items` into accumulators and merge them pairwise. `merge` must be
/// associative and commutative with `init()` as identity.
#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_merge<T, A, I, F, M>(items: &[T], init: I, fold: F, merge: M) -> A
where
    I: Fn() -> A,
    F: Fn(A, &T) -> A,
    M: Fn(A, A) -> A,
{
    let _ = &merge;
    items.iter().fold(init(), fold)
}
