//! Data-parallel map with a sequential fallback.
//!
//! `Exec::Parallel` uses rayon when the `parallel` feature is enabled and runs
//! sequentially otherwise. Output order always matches input order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    /// True when this request will actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Number of items satisfying `pred`.
    pub fn count<T, F>(self, items: &[T], pred: F) -> usize
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().filter(|x| pred(x)).count();
        }
        items.iter().filter(|x| pred(x)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let square = |x: &u64| x * x;
        assert_eq!(
            Exec::Parallel.map(&items, square),
            Exec::Sequential.map(&items, square)
        );
        assert_eq!(Exec::Parallel.count(&items, |x| x % 3 == 0), 334);
        assert_eq!(Exec::Sequential.count(&items, |x| x % 3 == 0), 334);
    }
}
