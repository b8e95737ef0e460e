//! Ordered map over independent work items, on a rayon pool when the
//! `parallel` feature is enabled and sequentially otherwise. Output order
//! always follows input order.

/// How to execute a batch of independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `None` uses rayon's global pool; `Some(w)` a dedicated pool of `w` threads.
    Parallel(Option<usize>),
}

impl Execution {
    /// Parallel with `workers` threads, or sequential for one worker or when
    /// the crate is built without the `parallel` feature.
    pub fn with_workers(workers: usize) -> Self {
        if workers <= 1 || !cfg!(feature = "parallel") {
            Self::Sequential
        } else {
            Self::Parallel(Some(workers))
        }
    }

    /// The default pool (all cores) if available.
    pub fn auto() -> Self {
        if cfg!(feature = "parallel") {
            Self::Parallel(None)
        } else {
            Self::Sequential
        }
    }

    /// Maps `f` over `items`, giving each worker a scratch state built by `init`.
    pub fn map_init<T, S, U, I, F>(self, items: &[T], init: I, f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &T) -> U + Sync + Send,
    {
        match self {
            Self::Sequential => {
                let mut state = init();
                items.iter().map(|item| f(&mut state, item)).collect()
            }
            #[cfg(feature = "parallel")]
            Self::Parallel(workers) => parallel::map_init(items, workers, init, f),
            #[cfg(not(feature = "parallel"))]
            Self::Parallel(_) => Self::Sequential.map_init(items, init, f),
        }
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        self.map_init(items, || (), |_, item| f(item))
    }
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    pub(super) fn map_init<T, S, U, I, F>(
        items: &[T],
        workers: Option<usize>,
        init: I,
        f: F,
    ) -> Vec<U>
    where
        T: Sync,
        U: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &T) -> U + Sync + Send,
    {
        let run = || {
            items
                .par_iter()
                .with_max_len(1)
                .map_init(&init, |state, item| f(state, item))
                .collect()
        };
        match workers {
            None => run(),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("failed to build worker pool")
                .install(run),
        }
    }
}
