//! Index-ordered map over `0..n`, parallel when the `parallel` feature is on.
//!
//! Results come back in index order, so any reduction the caller performs
//! afterwards is independent of scheduling and worker count.

/// `workers = None` uses every available core; ignored without `parallel`.
pub fn map_indices<T, F>(n: u64, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    imp::map_indices(n, workers, f)
}

#[cfg(feature = "parallel")]
mod imp {
    use rayon::prelude::*;

    pub fn map_indices<T, F>(n: u64, workers: Option<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        if workers == Some(1) {
            return (0..n).map(f).collect();
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = workers {
            builder = builder.num_threads(w);
        }
        match builder.build() {
            Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
            Err(_) => (0..n).map(f).collect(),
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn map_indices<T, F>(n: u64, _workers: Option<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
