//! Trial fan-out for campaigns and grid sweeps.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! pool; without it the same closures run in a plain loop. Results are
//! collected in index order either way, so reductions see identical input.

/// How to run a batch of independent evaluations. `Parallel` degrades to
/// a plain loop when the crate is built without the `parallel` feature.
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

/// `(0..n).map(f)` collected in order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps then folds with an associative `combine`; `identity` must be neutral.
pub fn map_reduce<T, F, R>(exec: Execution, n: usize, identity: T, f: F, combine: R) -> T
where
    T: Send + Sync + Clone,
    F: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| identity.clone(), &combine);
    }
    let _ = exec;
    (0..n).map(f).fold(identity, combine)
}
