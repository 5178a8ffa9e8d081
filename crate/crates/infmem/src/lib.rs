//! Config-driven experiment runner for chains with infinite memory.
//!
//! A JSON config names a model from the catalogue, a simulation plan and a
//! list of tasks. [`runner::run`] executes the tasks in order, writes one CSV
//! per task and a `manifest.json` holding the resolved config and every
//! verdict. Replications run on a rayon pool; every replication has its own
//! random stream, so outputs do not depend on the thread count.

pub mod config;
pub mod error;
pub mod output;
pub mod parallel;
pub mod runner;
pub mod tasks;

pub use config::ExperimentConfig;
pub use error::{Result, RunError};
pub use parallel::RayonReplicator;
pub use runner::{run, RunSummary};
