//! Data-parallel map over independent runs.
//!
//! With the `parallel` feature the work goes to a dedicated rayon pool;
//! without it every request runs sequentially. Results always come back in
//! input order, so the caller never observes scheduling.

/// How a batch of independent runs is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    /// Worker threads; 0 lets the pool pick one per core.
    Parallel { threads: usize },
}

impl Execution {
    /// `--parallel n` semantics: 1 is sequential, anything else a pool of `n`.
    pub fn from_threads(n: usize) -> Self {
        if n == 1 {
            Execution::Sequential
        } else {
            Execution::Parallel { threads: n }
        }
    }
}

pub(crate) fn map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel { threads } => parallel_map(items, threads, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        // Pool creation only fails on resource exhaustion; fall back.
        Err(_) => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, U, F>(items: &[T], _threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}
