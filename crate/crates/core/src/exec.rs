//! Sequential or data-parallel evaluation of independent search shards.

/// How shard loops are run. Results are identical and identically ordered
/// under both variants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// Every variant compiled into this build.
    pub fn available() -> &'static [Execution] {
        &[
            Execution::Sequential,
            #[cfg(feature = "parallel")]
            Execution::Parallel,
        ]
    }

    /// Maps every item to a batch of results and concatenates the batches in
    /// input order.
    pub(crate) fn flat_map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Vec<U> + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().flat_map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().flat_map_iter(f).collect()
            }
        }
    }

    pub(crate) fn filter<T, F>(self, items: &[T], keep: F) -> Vec<T>
    where
        T: Sync + Send + Clone,
        F: Fn(&T) -> bool + Sync + Send,
    {
        self.flat_map(items, |x| if keep(x) { vec![x.clone()] } else { Vec::new() })
    }
}
