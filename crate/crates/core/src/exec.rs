//! Work scheduling for independent work items (per-firm cascades, ensemble
//! members, bootstrap replicates, experiment reps).
//!
//! Every batch is an order-preserving indexed map, so results are identical
//! for any worker count; parallelism only changes wall-clock time. With the
//! `parallel` feature disabled everything runs on the calling thread.

/// How to schedule a batch of independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Run on the calling thread.
    Sequential,
    /// Run on a dedicated rayon pool with the given number of workers.
    #[cfg(feature = "parallel")]
    Workers(usize),
    /// Run on the shared rayon pool sized to available parallelism.
    #[cfg(feature = "parallel")]
    Auto,
}

impl Default for Parallelism {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Parallelism::Auto
        }
        #[cfg(not(feature = "parallel"))]
        {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    /// Parses a worker-count flag: 0 or absent means auto.
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            None | Some(0) => Parallelism::default(),
            Some(_w) => {
                #[cfg(feature = "parallel")]
                {
                    Parallelism::Workers(_w)
                }
                #[cfg(not(feature = "parallel"))]
                {
                    Parallelism::Sequential
                }
            }
        }
    }
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, par: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Workers(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .expect("failed to build worker pool");
            pool.install(|| {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            })
        }
        #[cfg(feature = "parallel")]
        Parallelism::Auto => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let seq = map_indexed(100, Parallelism::Sequential, |i| i * i);
        #[cfg(feature = "parallel")]
        {
            let par = map_indexed(100, Parallelism::Workers(4), |i| i * i);
            assert_eq!(seq, par);
            let auto = map_indexed(100, Parallelism::Auto, |i| i * i);
            assert_eq!(seq, auto);
        }
        assert_eq!(seq[10], 100);
    }
}
