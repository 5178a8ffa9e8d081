//! Monte Carlo checks of the limit theorems (SLLN, CLT, SIP) and of the
//! density bound for affine models, plus the statistics they rest on.
//!
//! Diagnostics look at the first coordinate of the state.

pub mod kde;
pub mod ks;
pub mod limit;
pub mod lrv;

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChainModel, Moment, Provenance};
use crate::numeric::mean;
use crate::orlicz::OrliczFunction;
use crate::rng::derive_seed;
use crate::simulate::{choose_truncation, run_truncated, SimulationPlan};

pub use kde::{Bandwidth, Kde1, Kde2};
pub use ks::{kolmogorov_survival, ks_statistic};
pub use limit::{clt_test, density_bound_check, sip_lil_diagnostic, slln_diagnostic};
pub use lrv::{autocovariance, estimate_lrv, LrvEstimate, LrvMethod, Taper};

/// Relative accuracy (in `Power(1)` norm, relative to `mu_1/(1-a)`) of the
/// truncated chain used as a stationary sampler.
pub const STATIONARY_REL_EPS: f64 = 1e-6;
/// Minimum length of the independent run used for `E X_0` and `sigma^2`.
pub const LONG_RUN: usize = 1_000_000;

const SALT_LONG_RUN: u64 = 0x6c6f_6e67;

/// Truncation order and burn-in used to draw (approximately) stationary paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSetup {
    pub p: usize,
    pub burn_in: usize,
}

impl RunSetup {
    pub fn plan(&self, horizon: usize, replications: usize, seed: u64) -> Result<SimulationPlan> {
        SimulationPlan::new(self.p, self.burn_in, horizon, replications, seed)
    }
}

/// [`choose_truncation`] with `Phi = Power(1)` at `eps = 1e-6 mu_1/(1-a)`.
pub fn default_setup(model: &ChainModel) -> Result<RunSetup> {
    let mu = model.mu_1().value;
    if mu == 0.0 {
        return Ok(RunSetup { p: model.coeffs().order().unwrap_or(1).max(1), burn_in: 0 });
    }
    let eps = STATIONARY_REL_EPS * mu / (1.0 - model.a());
    let t = choose_truncation(model, &OrliczFunction::Power { m: 1.0 }, eps)?;
    Ok(RunSetup { p: t.p, burn_in: t.burn_in })
}

/// First coordinates of one stationary path of length `n`.
pub fn stationary_path(model: &ChainModel, setup: RunSetup, n: usize, seed: u64, replication: u64) -> Result<Vec<f64>> {
    let plan = SimulationPlan { p: setup.p, burn_in: setup.burn_in, horizon: n, replications: 1, seed };
    let mut xs = Vec::with_capacity(n);
    run_truncated(model, &plan, replication, |_, x| xs.push(x[0]))?;
    Ok(xs)
}

fn long_run(model: &ChainModel, setup: RunSetup, n: usize, seed: u64) -> Result<Vec<f64>> {
    stationary_path(model, setup, n.max(LONG_RUN), derive_seed(seed, SALT_LONG_RUN), 0)
}

/// `E X_0` in closed form, or the mean of an independent long run with a
/// batch-means confidence half-width.
pub fn resolve_mean(model: &ChainModel, setup: RunSetup, n: usize, seed: u64) -> Result<Moment> {
    if let Some(m) = model.stationary_mean() {
        return Ok(Moment::closed(m));
    }
    let xs = long_run(model, setup, n, seed)?;
    Ok(empirical_mean(&xs))
}

fn empirical_mean(xs: &[f64]) -> Moment {
    let lrv = estimate_lrv(xs, LrvMethod::BatchMeans { batch_len: None }).map(|e| e.value.max(0.0)).unwrap_or(0.0);
    let ci = 1.96 * (lrv / xs.len() as f64).sqrt();
    Moment { value: mean(xs), provenance: Provenance::Empirical { samples: xs.len(), ci_halfwidth: ci } }
}

/// `sigma^2` estimated from one stationary path of length `n`.
pub fn estimate_long_run_variance(model: &ChainModel, method: LrvMethod, n: usize, seed: u64) -> Result<LrvEstimate> {
    let setup = default_setup(model)?;
    let xs = stationary_path(model, setup, n, seed, 0)?;
    estimate_lrv(&xs, method)
}

/// How `sigma^2` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Sigma2Source {
    Given,
    ClosedForm,
    Estimated { method: LrvMethod, samples: usize, window: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma2 {
    pub value: f64,
    pub source: Sigma2Source,
}

/// Moments a diagnostic needs: `E X_0` and, optionally, `sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Centering {
    pub mean: Moment,
    pub sigma2: Option<Sigma2>,
}

/// Resolves `E X_0` and `sigma^2` (given, closed form, or a Bartlett
/// estimate on an independent long run), sharing one long run between them.
pub fn resolve_centering(model: &ChainModel, setup: RunSetup, n: usize, sigma2: Option<f64>, want_sigma2: bool, seed: u64) -> Result<Centering> {
    let closed_mean = model.stationary_mean();
    let closed_s2 = model.long_run_variance();
    let need_s2 = want_sigma2 && sigma2.is_none() && closed_s2.is_none();
    let run = if closed_mean.is_none() || need_s2 { Some(long_run(model, setup, n, seed)?) } else { None };
    let mean = match (closed_mean, &run) {
        (Some(m), _) => Moment::closed(m),
        (None, Some(xs)) => empirical_mean(xs),
        (None, None) => unreachable!(),
    };
    let s2 = if !want_sigma2 {
        None
    } else if let Some(v) = sigma2 {
        Some(Sigma2 { value: v, source: Sigma2Source::Given })
    } else if let Some(v) = closed_s2 {
        Some(Sigma2 { value: v, source: Sigma2Source::ClosedForm })
    } else {
        let xs = run.as_ref().unwrap();
        let method = LrvMethod::default();
        let e = estimate_lrv(xs, method)?;
        Some(Sigma2 { value: e.value, source: Sigma2Source::Estimated { method, samples: xs.len(), window: e.window } })
    };
    Ok(Centering { mean, sigma2: s2 })
}

/// Verdict thresholds. The limit theorems carry no finite-sample error bars,
/// so these are configuration, with these defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// CLT passes when every KS p-value exceeds this.
    pub ks_alpha: f64,
    /// Accepted range of the LIL quantile.
    pub lil_band: (f64, f64),
    /// Quantile of `R` compared with `lil_band`.
    pub lil_quantile: f64,
    /// KDE bias allowance `delta` in the density check.
    pub kde_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { ks_alpha: 0.01, lil_band: (0.5, 2.0), lil_quantile: 0.9, kde_slack: 0.15 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let ok = self.ks_alpha > 0.0
            && self.ks_alpha < 1.0
            && self.lil_band.0 >= 0.0
            && self.lil_band.0 <= self.lil_band.1
            && self.lil_quantile > 0.0
            && self.lil_quantile < 1.0
            && self.kde_slack >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(alloc::format!("invalid thresholds {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Theorem {
    Slln { q: f64 },
    Clt,
    Sip,
    Density { n: usize },
}

/// One statistic at one parameter point (`n`, `t`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub statistic: String,
    pub point: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTheoremReport {
    pub theorem: Theorem,
    pub rows: Vec<ReportRow>,
    pub thresholds: Thresholds,
    pub centering: Option<Centering>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl LimitTheoremReport {
    /// Values of `statistic` in row order.
    pub fn values(&self, statistic: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.statistic == statistic).map(|r| r.value).collect()
    }
}

pub(crate) fn row(statistic: &str, point: f64, value: f64) -> ReportRow {
    ReportRow { statistic: String::from(statistic), point, value }
}
