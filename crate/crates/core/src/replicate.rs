//! Running independent replications.
//!
//! A replication is identified by its index and draws its randomness from
//! streams keyed by that index, so an implementation is free to run them in
//! any order as long as results come back in index order.

use alloc::vec::Vec;

use crate::error::Result;

pub trait Replicator: Sync {
    /// `[f(0), f(1), ..., f(n - 1)]`.
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;

    /// Like [`map`](Self::map) for fallible work; the error from the lowest
    /// failing index is returned.
    fn try_map<T, F>(&self, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}

/// Runs replications one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Replicator for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..n as u64).map(f).collect()
    }
}
