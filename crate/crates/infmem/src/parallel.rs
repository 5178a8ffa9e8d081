//! Rayon-backed replication.

use infmem_core::Replicator;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Runs replications on a dedicated rayon pool. Results are collected by
/// index, so the thread count never changes the output.
pub struct RayonReplicator {
    pool: ThreadPool,
}

impl RayonReplicator {
    /// `threads = None` uses rayon's default (one per logical CPU).
    pub fn new(threads: Option<usize>) -> Result<Self, ThreadPoolBuildError> {
        let mut builder = ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n.max(1));
        }
        Ok(RayonReplicator { pool: builder.build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `op` inside the pool.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        self.pool.install(op)
    }
}

impl Replicator for RayonReplicator {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n as u64).into_par_iter().map(f).collect())
    }
}
