//! Sequential or thread-pool execution of independent index ranges.
//!
//! Every caller merges results with exact arithmetic, so the parallel and
//! sequential paths return identical values regardless of scheduling.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Thread cap from FFZETA_THREADS, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("FFZETA_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

#[cfg(feature = "parallel")]
fn pool() -> &'static rayon::ThreadPool {
    use std::sync::OnceLock;
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new().thread_name(|i| format!("ffzeta-{i}"));
        if let Some(n) = thread_cap() {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// Number of worker threads the parallel path will use.
pub fn worker_count() -> usize {
    #[cfg(feature = "parallel")]
    {
        pool().current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Evaluates `f` on 0..n and returns the results in index order.
pub fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par.is_parallel() && n > 1 {
        use rayon::prelude::*;
        return pool().install(|| (0..n).into_par_iter().map(&f).collect());
    }
    let _ = par;
    (0..n).map(f).collect()
}

/// Like `map_indexed`, stopping at the first error.
pub fn try_map_indexed<T, E, F>(par: Parallelism, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indexed(par, n, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let a = map_indexed(Parallelism::Sequential, 100, |i| i * i);
        let b = map_indexed(Parallelism::Parallel, 100, |i| i * i);
        assert_eq!(a, b);
        let e: Result<Vec<usize>, usize> = try_map_indexed(Parallelism::Parallel, 10, |i| if i == 7 { Err(i) } else { Ok(i) });
        assert_eq!(e, Err(7));
        assert!(worker_count() >= 1);
    }
}
