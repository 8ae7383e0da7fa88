//! Case-level data parallelism for the sweep and batch workloads.
//!
//! With the `parallel` feature (default) `map` fans out over rayon; without it
//! the same call runs sequentially. `map_seq` is always sequential and exists
//! so the benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}

pub fn map_seq<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..200).collect();
        let a = super::map(items.clone(), |x| x * x);
        let b = super::map_seq(items, |x| x * x);
        assert_eq!(a, b);
    }
}
