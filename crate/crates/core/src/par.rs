//! Execution mode for the verification sweeps. With the `parallel` feature
//! off, `Parallel` runs sequentially.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items` and folds the results with `merge`, starting from
/// `identity()`. `merge` must be associative so both modes agree.
pub fn map_reduce<T, R, F, M, I>(exec: Execution, items: &[T], identity: I, f: F, merge: M) -> R
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(&f).reduce(&identity, &merge);
    }
    let _ = exec;
    items.iter().map(f).fold(identity(), merge)
}
