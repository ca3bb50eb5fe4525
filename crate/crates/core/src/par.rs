//! Order-preserving data parallelism. With the `parallel` feature the work is
//! spread over a rayon pool; without it, or with one job, it runs in place.

/// Whether this build can run checks concurrently.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// `items.map(f)` with results in input order. `jobs` bounds the number of
/// worker threads; `None` uses the global pool.
pub fn map_ordered<T, R, F>(items: &[T], jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs == Some(1) || items.len() < 2 {
        return sequential(items, f);
    }
    parallel(items, jobs, f)
}

/// The sequential fallback, always available.
pub fn sequential<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn parallel<T, R, F>(items: &[T], jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match jobs {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(run),
            Err(_) => sequential(items, &f),
        },
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel<T, R, F>(items: &[T], _jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    sequential(items, f)
}
