//! Numerical core for stationary chains with infinite memory
//! `X_t = F(X_{t-1}, X_{t-2}, ...; xi_t)`.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`orlicz`]: Orlicz functions, empirical Orlicz norms and the `Phi~_q` transform;
//! * [`coeffs`] and [`models`]: Lipschitz coefficient sequences and the model catalogue;
//! * [`simulate`]: p-Markov truncations, recursive approximation and coupled pairs;
//! * [`bounds`]: closed-form dependence, truncation and moment bounds, (Dp) checks;
//! * [`dependence`]: coupling-gap estimates of the tau coefficients;
//! * [`stats`]: KS, long-run variance, KDE and limit-theorem diagnostics.
//!
//! Monte Carlo work is expressed against the [`replicate::Replicator`] trait so a
//! host crate can run replications in parallel; [`replicate::Sequential`] is the
//! in-crate default. Every replication draws from its own ChaCha8 stream, so
//! results never depend on scheduling.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod coeffs;
pub mod dependence;
pub mod error;
pub mod model;
pub mod models;
pub mod numeric;
pub mod orlicz;
pub mod replicate;
pub mod rng;
pub mod sampler;
pub mod simulate;
pub mod stats;

pub use coeffs::CoefficientSequence;
pub use error::{Error, Result};
pub use model::{ChainMap, ChainModel, Innovation, Moment, Past, Provenance};
pub use orlicz::{Orlicz, OrliczFunction, PhiTildeQuery};
pub use replicate::{Replicator, Sequential};
pub use sampler::Sampler;
pub use simulate::{SamplePath, SimulationPlan};
