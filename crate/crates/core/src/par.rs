//! Thin switch between sequential and rayon-backed data-parallel loops.
//!
//! Every parallel call site in the crate merges results in a fixed order, so
//! output does not depend on scheduling; the `parallel` feature only changes
//! wall-clock time.

/// Parallelism strategy for the batch helpers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Parallelism {
    /// The default strategy: rayon when the `parallel` feature is enabled.
    pub fn auto() -> Self {
        #[cfg(feature = "parallel")]
        {
            Parallelism::Rayon
        }
        #[cfg(not(feature = "parallel"))]
        {
            Parallelism::Sequential
        }
    }
}

/// Map `f` over `items`, preserving input order in the output.
pub fn map_collect<T, U, F>(par: Parallelism, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match par {
        Parallelism::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
    }
}
