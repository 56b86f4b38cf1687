//! Pluggable execution of independent work items.
//!
//! Sums are always reduced in index order, so a parallel executor returns the
//! same bits as [`Serial`].

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Returns `[f(0), f(1), …, f(n-1)]`.
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> f64 + Sync)) -> Vec<f64>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> f64 + Sync)) -> Vec<f64> {
        (0..n).map(f).collect()
    }
}

/// `Σ f(i)` evaluated through `exec`, reduced left to right.
pub fn ordered_sum(exec: &dyn Executor, n: usize, f: &(dyn Fn(usize) -> f64 + Sync)) -> f64 {
    exec.map(n, f).iter().sum()
}
