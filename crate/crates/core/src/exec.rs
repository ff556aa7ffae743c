//! Sequential or data-parallel evaluation of indexed work items.
//!
//! Results are always returned in index order, so a sweep produces identical
//! output under either strategy. Without the `parallel` feature,
//! [`Execution::Parallel`] runs sequentially.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

/// `(0..n).map(f)` collected in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(Execution::Sequential, 1000, |i| i * i);
        let par = map_indexed(Execution::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }
}
