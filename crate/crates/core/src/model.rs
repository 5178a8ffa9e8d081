//! The model interface `X_t = F(X_{t-1}, X_{t-2}, ...; xi_t)` on `E = R^d`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::numeric::{mean, variance};
use crate::orlicz::{estimate_orlicz_norm, OrliczFunction};
use crate::rng::{stream, Lane};

/// A finitely non-zero past `(x_1, x_2, ...)`, most recent first.
///
/// `history` is chronological (oldest state first), so lag 1 is its last
/// state. Lags beyond the history continue with `tail` and are zero after
/// that. Lags beyond `max_lag` are zero regardless.
#[derive(Debug, Clone, Copy)]
pub struct Past<'a> {
    history: &'a [f64],
    tail: &'a [f64],
    dim: usize,
    max_lag: usize,
}

impl<'a> Past<'a> {
    pub fn new(history: &'a [f64], dim: usize) -> Self {
        debug_assert!(dim > 0 && history.len().is_multiple_of(dim));
        Past { history, tail: &[], dim, max_lag: usize::MAX }
    }

    pub fn empty(dim: usize) -> Self {
        Past::new(&[], dim)
    }

    /// Zero out every lag above `p`.
    pub fn truncated(mut self, p: usize) -> Self {
        self.max_lag = p;
        self
    }

    /// States used once the history is exhausted, then zeros.
    pub fn with_tail(mut self, tail: &'a [f64]) -> Self {
        debug_assert!(tail.len().is_multiple_of(self.dim));
        self.tail = tail;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest lag that may be non-zero.
    pub fn depth(&self) -> usize {
        ((self.history.len() + self.tail.len()) / self.dim).min(self.max_lag)
    }

    /// State at lag `j >= 1`, or `None` when it is zero by padding.
    pub fn lag(&self, j: usize) -> Option<&'a [f64]> {
        if j == 0 || j > self.max_lag {
            return None;
        }
        let d = self.dim;
        let n = self.history.len() / d;
        if j <= n {
            let i = n - j;
            return Some(&self.history[i * d..(i + 1) * d]);
        }
        let k = j - n - 1;
        (k < self.tail.len() / d).then(|| &self.tail[k * d..(k + 1) * d])
    }

    /// First coordinate at lag `j`, zero when padded.
    pub fn scalar(&self, j: usize) -> f64 {
        self.lag(j).map_or(0.0, |x| x[0])
    }
}

/// One innovation `xi_t`: a fixed-length vector of draws plus a key seeding
/// any further draws the map needs lazily (e.g. offspring counts).
#[derive(Debug, Clone, PartialEq)]
pub struct Innovation {
    pub values: Vec<f64>,
    pub key: u64,
}

impl Innovation {
    pub fn new(len: usize) -> Self {
        Innovation { values: vec![0.0; len], key: 0 }
    }
}

/// Moments of the invariant law and closed-form facts about the innovations,
/// where known.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityInfo {
    /// `M_ = inf_past det M(past) > 0` for affine models.
    pub det_lower: f64,
    /// `||f_xi||_inf`.
    pub innovation_density_sup: f64,
}

/// The map `F` together with its innovation law.
pub trait ChainMap: Send + Sync {
    fn state_dim(&self) -> usize {
        1
    }

    fn innovation_len(&self) -> usize {
        1
    }

    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation);

    /// Writes `F(past; innovation)` into `out` (length `state_dim`).
    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]);

    /// `||F(0, 0, ...; xi_0)||_Phi` in closed form.
    fn origin_norm(&self, _phi: &OrliczFunction) -> Option<f64> {
        None
    }

    /// States live on the nonnegative integers.
    fn count_valued(&self) -> bool {
        false
    }

    /// Closed-form `E X_0` of the stationary solution.
    fn stationary_mean(&self) -> Option<f64> {
        None
    }

    /// Closed-form long-run variance `sum_i Cov(X_0, X_i)`.
    fn long_run_variance(&self) -> Option<f64> {
        None
    }

    fn density_info(&self) -> Option<DensityInfo> {
        None
    }
}

/// Where a constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    /// Sample estimate with a 95% confidence half-width.
    Empirical { samples: usize, ci_halfwidth: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub value: f64,
    pub provenance: Provenance,
}

impl Moment {
    pub fn closed(value: f64) -> Self {
        Moment { value, provenance: Provenance::ClosedForm }
    }
}

/// Sample size for Monte Carlo moment constants.
pub const MOMENT_SAMPLES: usize = 100_000;
pub(crate) const MOMENT_SEED: u64 = 0x6d6f_6d65_6e74;

/// A chain with infinite memory: the map, its Lipschitz coefficients and
/// moment constants. Immutable and cheap to clone.
#[derive(Clone)]
pub struct ChainModel {
    name: String,
    map: Arc<dyn ChainMap>,
    coeffs: CoefficientSequence,
    contraction_phi: OrliczFunction,
    coeffs_provenance: Provenance,
    mu_1: Moment,
}

impl core::fmt::Debug for ChainModel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ChainModel")
            .field("name", &self.name)
            .field("coeffs", &self.coeffs)
            .field("contraction_phi", &self.contraction_phi)
            .field("coeffs_provenance", &self.coeffs_provenance)
            .field("mu_1", &self.mu_1)
            .finish()
    }
}

impl ChainModel {
    /// Assembles a model without checking `a < 1`. The catalogue
    /// constructors in [`crate::models`] check it.
    pub fn from_parts(name: impl Into<String>, map: Arc<dyn ChainMap>, coeffs: CoefficientSequence, contraction_phi: OrliczFunction) -> Result<Self> {
        coeffs.validate()?;
        contraction_phi.validate()?;
        let mut model = ChainModel { name: name.into(), map, coeffs, contraction_phi, coeffs_provenance: Provenance::ClosedForm, mu_1: Moment::closed(0.0) };
        model.mu_1 = model.mu_phi(&OrliczFunction::Power { m: 1.0 })?;
        Ok(model)
    }

    /// Like [`from_parts`](Self::from_parts) but rejects `a >= 1`.
    pub fn contractive(name: impl Into<String>, map: Arc<dyn ChainMap>, coeffs: CoefficientSequence, contraction_phi: OrliczFunction) -> Result<Self> {
        coeffs.check_contraction()?;
        Self::from_parts(name, map, coeffs, contraction_phi)
    }

    /// Marks the coefficients as estimated rather than derived.
    pub fn with_coeffs_provenance(mut self, provenance: Provenance) -> Self {
        self.coeffs_provenance = provenance;
        self
    }

    pub fn coeffs_provenance(&self) -> Provenance {
        self.coeffs_provenance
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn map(&self) -> &dyn ChainMap {
        &*self.map
    }

    pub fn coeffs(&self) -> &CoefficientSequence {
        &self.coeffs
    }

    /// `a = sum a_j`.
    pub fn a(&self) -> f64 {
        self.coeffs.sum()
    }

    /// Orlicz function in which the Lipschitz coefficients were computed.
    pub fn contraction_phi(&self) -> &OrliczFunction {
        &self.contraction_phi
    }

    pub fn state_dim(&self) -> usize {
        self.map.state_dim()
    }

    /// `mu_1 = ||F(0, 0, ...; xi_0)||_1`.
    pub fn mu_1(&self) -> Moment {
        self.mu_1
    }

    /// `mu_Phi = ||F(0, 0, ...; xi_0)||_Phi`, closed form when the map knows
    /// it, otherwise estimated from 10^5 draws with a batch-means CI.
    pub fn mu_phi(&self, phi: &OrliczFunction) -> Result<Moment> {
        if let Some(v) = self.map.origin_norm(phi) {
            return Ok(Moment::closed(v));
        }
        let d = self.state_dim();
        let mut rng = stream(MOMENT_SEED, 0, Lane::Aux);
        let mut innovation = Innovation::new(self.map.innovation_len());
        let mut out = vec![0.0; d];
        let origin = Past::empty(d);
        let mut lengths = Vec::with_capacity(MOMENT_SAMPLES);
        for _ in 0..MOMENT_SAMPLES {
            self.map.sample_innovation(&mut rng, &mut innovation);
            self.map.apply(&origin, &innovation, &mut out);
            lengths.push(euclidean(&out));
        }
        empirical_norm(&lengths, phi)
    }

    pub fn stationary_mean(&self) -> Option<f64> {
        self.map.stationary_mean()
    }

    pub fn long_run_variance(&self) -> Option<f64> {
        self.map.long_run_variance()
    }

    pub fn density_info(&self) -> Option<DensityInfo> {
        self.map.density_info()
    }
}

/// Empirical Orlicz norm of `lengths` with a 95% half-width from 20 batches.
pub(crate) fn empirical_norm(lengths: &[f64], phi: &OrliczFunction) -> Result<Moment> {
    const BATCHES: usize = 20;
    let value = estimate_orlicz_norm(lengths, phi)?;
    let size = lengths.len().div_ceil(BATCHES);
    let batch: Vec<f64> = lengths.chunks(size).map(|c| estimate_orlicz_norm(c, phi)).collect::<Result<_>>()?;
    let ci_halfwidth = 1.96 * (variance(&batch) / batch.len() as f64).sqrt();
    Ok(Moment { value, provenance: Provenance::Empirical { samples: lengths.len(), ci_halfwidth } })
}

/// Euclidean norm.
pub fn euclidean(x: &[f64]) -> f64 {
    if x.len() == 1 {
        x[0].abs()
    } else {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Euclidean distance.
pub fn euclidean_diff(x: &[f64], y: &[f64]) -> f64 {
    if x.len() == 1 {
        (x[0] - y[0]).abs()
    } else {
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Verdicts on `a < 1` and `mu_Phi < inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub a: f64,
    pub mu_1: Moment,
    pub mu_phi: Moment,
    pub coefficients_summable: bool,
    pub moment_finite: bool,
    pub pass: bool,
}

/// Checks `a = sum a_j < 1` and `mu_Phi < inf`. Failures are verdicts.
pub fn validate_contraction(model: &ChainModel, phi: &OrliczFunction) -> Result<ContractionReport> {
    let a = model.a();
    let mu_phi = model.mu_phi(phi)?;
    let coefficients_summable = a < 1.0;
    let moment_finite = mu_phi.value.is_finite();
    Ok(ContractionReport { a, mu_1: model.mu_1(), mu_phi, coefficients_summable, moment_finite, pass: coefficients_summable && moment_finite })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    pub innovations_per_pair: usize,
    /// Largest `||F(x;xi) - F(y;xi)||_Phi / sum_j a_j ||x_j - y_j||` seen.
    pub worst_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Options for [`empirical_lipschitz_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub pairs: usize,
    pub past_len: usize,
    pub innovations_per_pair: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LipschitzCheck {
    fn default() -> Self {
        LipschitzCheck { pairs: 100, past_len: 8, innovations_per_pair: 10_000, tolerance: 0.05, seed: 1 }
    }
}

fn sample_state(model: &ChainModel, rng: &mut dyn RngCore, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = if model.map.count_valued() { rng.random_range(0..=20u32) as f64 } else { 4.0 * rng.random::<f64>() - 2.0 };
    }
}

/// Monte Carlo check of the Lipschitz condition on random pairs of pasts
/// that differ in a random subset of coordinates.
pub fn empirical_lipschitz_check(model: &ChainModel, phi: &OrliczFunction, opts: &LipschitzCheck) -> Result<LipschitzReport> {
    if opts.pairs < 100 {
        return Err(Error::precondition(format!("need at least 100 pairs, got {}", opts.pairs)));
    }
    if opts.past_len == 0 || opts.innovations_per_pair == 0 {
        return Err(Error::precondition("past_len and innovations_per_pair must be positive"));
    }
    let d = model.state_dim();
    let map = model.map();
    let mut rng = stream(opts.seed, 0, Lane::Aux);
    let mut x = vec![0.0; opts.past_len * d];
    let mut y = vec![0.0; opts.past_len * d];
    let mut fx = vec![0.0; d];
    let mut fy = vec![0.0; d];
    let mut innovation = Innovation::new(map.innovation_len());
    let mut gaps = vec![0.0; opts.innovations_per_pair];
    let mut worst: f64 = 0.0;
    for _ in 0..opts.pairs {
        sample_state(model, &mut rng, &mut x);
        y.copy_from_slice(&x);
        let forced = rng.random_range(0..opts.past_len);
        for j in 0..opts.past_len {
            if j == forced || rng.random::<bool>() {
                let (s, e) = (j * d, (j + 1) * d);
                loop {
                    sample_state(model, &mut rng, &mut y[s..e]);
                    if y[s..e] != x[s..e] {
                        break;
                    }
                }
            }
        }
        let px = Past::new(&x, d);
        let py = Past::new(&y, d);
        let rhs: f64 = (1..=opts.past_len)
            .map(|j| model.coeffs.coefficient(j) * euclidean_diff(px.lag(j).unwrap(), py.lag(j).unwrap()))
            .sum();
        for g in gaps.iter_mut() {
            map.sample_innovation(&mut rng, &mut innovation);
            map.apply(&px, &innovation, &mut fx);
            map.apply(&py, &innovation, &mut fy);
            *g = euclidean_diff(&fx, &fy);
        }
        let lhs = estimate_orlicz_norm(&gaps, phi)?;
        let ratio = if lhs == 0.0 { 0.0 } else if rhs == 0.0 { f64::INFINITY } else { lhs / rhs };
        worst = worst.max(ratio);
    }
    Ok(LipschitzReport {
        pairs: opts.pairs,
        innovations_per_pair: opts.innovations_per_pair,
        worst_ratio: worst,
        tolerance: opts.tolerance,
        pass: worst <= 1.0 + opts.tolerance,
    })
}

/// Empirical mean of `|F(0; xi)|` over fresh draws, used in tests and reports.
pub fn origin_mean_abs(model: &ChainModel, samples: usize, seed: u64) -> f64 {
    let d = model.state_dim();
    let mut rng = stream(seed, 0, Lane::Aux);
    let mut innovation = Innovation::new(model.map().innovation_len());
    let mut out = vec![0.0; d];
    let origin = Past::empty(d);
    let v: Vec<f64> = (0..samples)
        .map(|_| {
            model.map().sample_innovation(&mut rng, &mut innovation);
            model.map().apply(&origin, &innovation, &mut out);
            euclidean(&out)
        })
        .collect();
    mean(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn past_lags_and_padding() {
        let hist = [1.0, 2.0, 3.0];
        let tail = [9.0];
        let p = Past::new(&hist, 1).with_tail(&tail);
        assert_eq!(p.scalar(1), 3.0);
        assert_eq!(p.scalar(3), 1.0);
        assert_eq!(p.scalar(4), 9.0);
        assert_eq!(p.scalar(5), 0.0);
        assert_eq!(p.depth(), 4);
        let t = p.truncated(2);
        assert_eq!(t.scalar(3), 0.0);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn vector_past() {
        let hist = [1.0, 2.0, 3.0, 4.0];
        let p = Past::new(&hist, 2);
        assert_eq!(p.lag(1).unwrap(), &[3.0, 4.0]);
        assert_eq!(p.lag(2).unwrap(), &[1.0, 2.0]);
        assert!(p.lag(3).is_none());
    }
}
