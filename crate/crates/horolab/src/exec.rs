//! Thread-pool executor for the core crate's [`Executor`] trait.

use horolab_core::exec::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

pub struct PoolExecutor {
    pool: ThreadPool,
}

impl PoolExecutor {
    /// A pool with `jobs` workers, or one per core when `None`.
    pub fn new(jobs: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = jobs {
            builder = builder.num_threads(n.max(1));
        }
        Ok(Self {
            pool: builder.build()?,
        })
    }

    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        self.pool.install(op)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for PoolExecutor {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> f64 + Sync)) -> Vec<f64> {
        self.pool
            .install(|| (0..n).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use horolab_core::exec::{ordered_sum, Serial};

    #[test]
    fn pool_sums_match_serial_bits() {
        let f = |i: usize| 1.0 / (1.0 + i as f64).powf(1.3);
        let pool = PoolExecutor::new(Some(4)).unwrap();
        assert_eq!(
            ordered_sum(&pool, 10_000, &f).to_bits(),
            ordered_sum(&Serial, 10_000, &f).to_bits()
        );
    }
}
