//! The model catalogue.
//!
//! Every constructor takes the Orlicz function `Phi` in which the Lipschitz
//! coefficients are computed and rejects `a >= 1`. Scalar models use
//! `E = R`; [`nonlinear_ar`] accepts any `E = R^d`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::model::{empirical_norm, ChainMap, ChainModel, DensityInfo, Innovation, Moment, Past, Provenance, MOMENT_SAMPLES, MOMENT_SEED};
use crate::orlicz::OrliczFunction;
use crate::rng::{stream, Lane};
use crate::sampler::Sampler;

/// `||xi||_Phi` for one innovation sampler, closed form when known.
pub fn innovation_norm(sampler: &Sampler, phi: &OrliczFunction) -> Result<Moment> {
    sampler.validate()?;
    if let Some(v) = sampler.orlicz_norm(phi) {
        return Ok(Moment::closed(v));
    }
    let mut rng = stream(MOMENT_SEED, 1, Lane::Aux);
    let xs: Vec<f64> = (0..MOMENT_SAMPLES).map(|_| sampler.sample(&mut rng).abs()).collect();
    empirical_norm(&xs, phi)
}

fn worst(a: Provenance, b: Provenance) -> Provenance {
    match (a, b) {
        (Provenance::ClosedForm, p) | (p, Provenance::ClosedForm) => p,
        (p, _) => p,
    }
}

/// Scalar nonlinearities with `g(0) = 0` and `Lip g = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Identity,
    Tanh,
    Sin,
}

impl Transform {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Tanh => x.tanh(),
            Transform::Sin => x.sin(),
        }
    }

    pub fn lipschitz(self) -> f64 {
        1.0
    }
}

// ---------------------------------------------------------------------------
// Nonlinear autoregression

/// One term `weight * g(x_lag)` of a scalar autoregression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagTerm {
    pub lag: usize,
    pub weight: f64,
    pub transform: Transform,
}

struct Autoregression<R> {
    dim: usize,
    regression: R,
    noise: Sampler,
    origin_is_zero: bool,
    linear: Option<f64>,
}

impl<R> ChainMap for Autoregression<R>
where
    R: Fn(&Past<'_>, &mut [f64]) + Send + Sync,
{
    fn state_dim(&self) -> usize {
        self.dim
    }

    fn innovation_len(&self) -> usize {
        self.dim
    }

    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        for v in innovation.values.iter_mut() {
            *v = self.noise.sample(rng);
        }
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        (self.regression)(past, out);
        for (o, s) in out.iter_mut().zip(&innovation.values) {
            *o += s;
        }
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        if !self.origin_is_zero {
            return None;
        }
        if self.dim == 1 {
            return self.noise.orlicz_norm(phi);
        }
        match (phi, self.noise) {
            (_, Sampler::Constant { value }) if value == 0.0 => Some(0.0),
            (OrliczFunction::Power { m }, s) if *m == 2.0 => s.abs_moment(2.0).map(|v| (self.dim as f64 * v).sqrt()),
            _ => None,
        }
    }

    fn stationary_mean(&self) -> Option<f64> {
        let s = self.linear?;
        (self.dim == 1).then(|| self.noise.mean() / (1.0 - s))
    }

    fn long_run_variance(&self) -> Option<f64> {
        let s = self.linear?;
        (self.dim == 1).then(|| self.noise.variance() / ((1.0 - s) * (1.0 - s)))
    }

    fn density_info(&self) -> Option<DensityInfo> {
        let sup = self.noise.density_sup()?;
        (self.dim == 1).then_some(DensityInfo { det_lower: 1.0, innovation_density_sup: sup })
    }
}

/// `X_t = R(X_{t-1}, ..., X_{t-p}) + xi_t` on `R^d` with iid coordinates of
/// `xi_t` drawn from `noise`. `coeffs` must be finite and carry the declared
/// Lipschitz constants `|R(x) - R(y)| <= sum_j a_j |x_j - y_j|`.
pub fn nonlinear_ar<R>(name: impl Into<String>, dim: usize, regression: R, coeffs: CoefficientSequence, noise: Sampler, phi: OrliczFunction) -> Result<ChainModel>
where
    R: Fn(&Past<'_>, &mut [f64]) + Send + Sync + 'static,
{
    if dim == 0 {
        return Err(Error::domain("state dimension must be at least 1"));
    }
    if !coeffs.has_finite_support() {
        return Err(Error::domain("nonlinear autoregression needs finite coefficients"));
    }
    noise.validate()?;
    let mut origin = alloc::vec![0.0; dim];
    regression(&Past::empty(dim), &mut origin);
    let origin_is_zero = origin.iter().all(|v| *v == 0.0);
    let map = Autoregression { dim, regression, noise, origin_is_zero, linear: None };
    ChainModel::contractive(name, Arc::new(map), coeffs, phi)
}

/// Scalar autoregression `X_t = sum_k w_k g_k(X_{t-l_k}) + xi_t`, with
/// `a_j = sum_{k: l_k = j} |w_k|`.
pub fn nonlinear_ar_terms(terms: &[LagTerm], noise: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    noise.validate()?;
    let order = terms.iter().map(|t| t.lag).max().unwrap_or(0);
    let mut values = alloc::vec![0.0; order];
    for t in terms {
        if t.lag == 0 || !t.weight.is_finite() {
            return Err(Error::domain(format!("invalid lag term {t:?}: lags start at 1 and weights must be finite")));
        }
        values[t.lag - 1] += t.weight.abs() * t.transform.lipschitz();
    }
    let coeffs = CoefficientSequence::finite(values)?;
    let linear = terms.iter().all(|t| t.transform == Transform::Identity).then(|| terms.iter().map(|t| t.weight).sum::<f64>());
    let owned: Vec<LagTerm> = terms.to_vec();
    let regression = move |past: &Past<'_>, out: &mut [f64]| {
        out[0] = owned.iter().map(|t| t.weight * t.transform.apply(past.scalar(t.lag))).sum();
    };
    let map = Autoregression { dim: 1, regression, noise, origin_is_zero: true, linear };
    let name = if terms.is_empty() { String::from("iid") } else { format!("nonlinear_ar({order})") };
    ChainModel::contractive(name, Arc::new(map), coeffs, phi)
}

/// Linear AR(1) `X_t = phi_1 X_{t-1} + xi_t`.
pub fn ar1(phi_1: f64, noise: Sampler) -> Result<ChainModel> {
    nonlinear_ar_terms(&[LagTerm { lag: 1, weight: phi_1, transform: Transform::Identity }], noise, OrliczFunction::Power { m: 1.0 })
}

// ---------------------------------------------------------------------------
// Stochastic recurrence with random affine maps

struct RandomAffine {
    a: Sampler,
    b: Sampler,
}

impl ChainMap for RandomAffine {
    fn innovation_len(&self) -> usize {
        2
    }

    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        innovation.values[0] = self.a.sample(rng);
        innovation.values[1] = self.b.sample(rng);
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        out[0] = innovation.values[0] * past.scalar(1) + innovation.values[1];
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        self.b.orlicz_norm(phi)
    }

    fn stationary_mean(&self) -> Option<f64> {
        (self.a.mean().abs() < 1.0).then(|| self.b.mean() / (1.0 - self.a.mean()))
    }

    fn long_run_variance(&self) -> Option<f64> {
        // Only the deterministic-slope case is linear.
        match self.a {
            Sampler::Constant { value } => Some(self.b.variance() / ((1.0 - value) * (1.0 - value))),
            _ => None,
        }
    }

    fn density_info(&self) -> Option<DensityInfo> {
        match self.a {
            Sampler::Constant { .. } => Some(DensityInfo { det_lower: 1.0, innovation_density_sup: self.b.density_sup()? }),
            _ => None,
        }
    }
}

/// The SRE `X_{t+1} = A_t X_t + B_t` with `a_1 = ||A||_Phi`.
pub fn sre_random_affine(a: Sampler, b: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    b.validate()?;
    let norm_a = innovation_norm(&a, &phi)?;
    if !(norm_a.value < 1.0) {
        return Err(Error::contraction("||L(phi)||_Phi", norm_a.value));
    }
    let coeffs = CoefficientSequence::finite(alloc::vec![norm_a.value])?;
    Ok(ChainModel::contractive("sre_random_affine", Arc::new(RandomAffine { a, b }), coeffs, phi)?.with_coeffs_provenance(norm_a.provenance))
}

// ---------------------------------------------------------------------------
// Galton-Watson with immigration

/// How the state 0 is treated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GwVariant {
    /// `F(x, (u_i)) = u_0 + sum_{i=1}^x u_i` for every `x >= 0`.
    #[default]
    StandardImmigration,
    /// `F(0, .) = 0`: zero is absorbing.
    PaperAbsorbing,
}

struct GaltonWatson {
    offspring: Sampler,
    immigration: Sampler,
    variant: GwVariant,
}

impl ChainMap for GaltonWatson {
    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        innovation.values[0] = self.immigration.sample(rng);
        innovation.key = rng.next_u64();
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        let x = past.scalar(1).max(0.0).round() as u64;
        if x == 0 && self.variant == GwVariant::PaperAbsorbing {
            out[0] = 0.0;
            return;
        }
        // Offspring u_1, u_2, ... come from one stream per innovation, so two
        // populations sharing an innovation share their first min(x, y) draws.
        let mut rng = ChaCha8Rng::seed_from_u64(innovation.key);
        let children: f64 = (0..x).map(|_| self.offspring.sample(&mut rng)).sum();
        out[0] = innovation.values[0] + children;
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        match self.variant {
            GwVariant::StandardImmigration => self.immigration.orlicz_norm(phi),
            GwVariant::PaperAbsorbing => Some(0.0),
        }
    }

    fn count_valued(&self) -> bool {
        true
    }

    fn stationary_mean(&self) -> Option<f64> {
        Some(match self.variant {
            GwVariant::StandardImmigration => self.immigration.mean() / (1.0 - self.offspring.mean()),
            GwVariant::PaperAbsorbing => 0.0,
        })
    }

    fn long_run_variance(&self) -> Option<f64> {
        match self.variant {
            GwVariant::StandardImmigration => {
                // X_t = m X_{t-1} + lambda + noise with Var(noise | X) = X s^2 + v.
                let m = self.offspring.mean();
                let mean = self.stationary_mean()?;
                let var = (mean * self.offspring.variance() + self.immigration.variance()) / (1.0 - m * m);
                Some(var * (1.0 + m) / (1.0 - m))
            }
            GwVariant::PaperAbsorbing => Some(0.0),
        }
    }
}

/// Galton-Watson process with immigration, `a_1 = ||zeta_{0,0}||_Phi`.
pub fn galton_watson_immigration(offspring: Sampler, immigration: Sampler, variant: GwVariant, phi: OrliczFunction) -> Result<ChainModel> {
    for s in [offspring, immigration] {
        s.validate()?;
        if !s.is_count() {
            return Err(Error::domain(format!("{s:?} is not integer valued")));
        }
    }
    let norm = innovation_norm(&offspring, &phi)?;
    if !(norm.value < 1.0) {
        return Err(Error::contraction("||zeta_{0,0}||_Phi", norm.value));
    }
    let coeffs = CoefficientSequence::finite(alloc::vec![norm.value])?;
    let name = match variant {
        GwVariant::StandardImmigration => "galton_watson",
        GwVariant::PaperAbsorbing => "galton_watson_absorbing",
    };
    Ok(ChainModel::contractive(name, Arc::new(GaltonWatson { offspring, immigration, variant }), coeffs, phi)?.with_coeffs_provenance(norm.provenance))
}

// ---------------------------------------------------------------------------
// Shared helper for maps driven by a weighted sum over the past

/// `sum_j c_j g(x_j)` over the lags where `c_j` can be nonzero.
fn weighted_sum(c: &[f64], tail: &CoefficientSequence, g: Transform, past: &Past<'_>) -> f64 {
    let depth = match tail.order() {
        Some(p) => past.depth().min(p),
        None => past.depth(),
    };
    let mut acc = 0.0;
    for j in 1..=depth {
        let x = past.scalar(j);
        if x != 0.0 {
            let w = if j <= c.len() { c[j - 1] } else { tail.coefficient(j) };
            acc += w * g.apply(x);
        }
    }
    acc
}

/// Coefficients cached up to this lag; later ones are computed on the fly.
const COEFF_CACHE: usize = 4096;

fn cache(coeffs: &CoefficientSequence) -> Vec<f64> {
    let n = coeffs.order().unwrap_or(COEFF_CACHE).min(COEFF_CACHE);
    (1..=n).map(|j| coeffs.coefficient(j)).collect()
}

fn sum_of_squares(coeffs: &CoefficientSequence) -> Option<f64> {
    match coeffs {
        CoefficientSequence::Finite { values } => Some(values.iter().map(|v| v * v).sum()),
        &CoefficientSequence::Geometric { c, gamma } => Some(c * c * gamma * gamma / (1.0 - gamma * gamma)),
        CoefficientSequence::Polynomial { .. } => None,
    }
}

// ---------------------------------------------------------------------------
// NL-ARCH(inf)

struct NlArch {
    alpha: f64,
    c: Vec<f64>,
    coeffs: CoefficientSequence,
    transform: Transform,
    noise: Sampler,
}

impl ChainMap for NlArch {
    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        innovation.values[0] = self.noise.sample(rng);
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        out[0] = innovation.values[0] * (self.alpha + weighted_sum(&self.c, &self.coeffs, self.transform, past));
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        self.noise.orlicz_norm(phi).map(|v| self.alpha.abs() * v)
    }

    fn stationary_mean(&self) -> Option<f64> {
        (self.noise.mean() == 0.0).then_some(0.0)
    }

    fn long_run_variance(&self) -> Option<f64> {
        // Centred LARCH is a martingale difference sequence, so sigma^2 = E X^2.
        if self.noise.mean() != 0.0 || self.transform != Transform::Identity {
            return None;
        }
        let s2 = self.noise.variance();
        let c2 = sum_of_squares(&self.coeffs)?;
        (s2 * c2 < 1.0).then(|| s2 * self.alpha * self.alpha / (1.0 - s2 * c2))
    }
}

/// `X_t = xi_t (alpha + sum_j c_j g(X_{t-j}))`, so `a_j = ||xi||_Phi c_j`.
/// `g = Identity` is LARCH(inf).
pub fn nl_arch_inf(alpha: f64, c: CoefficientSequence, transform: Transform, noise: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    if !alpha.is_finite() {
        return Err(Error::domain("alpha must be finite"));
    }
    c.validate()?;
    let norm = innovation_norm(&noise, &phi)?;
    let coeffs = c.scaled(norm.value * transform.lipschitz())?;
    let name = if transform == Transform::Identity { "larch" } else { "nl_arch" };
    let map = NlArch { alpha, c: cache(&c), coeffs: c, transform, noise };
    Ok(ChainModel::contractive(name, Arc::new(map), coeffs, phi)?.with_coeffs_provenance(norm.provenance))
}

/// LARCH(inf): `X_t = xi_t (alpha + sum_j c_j X_{t-j})`.
pub fn larch(alpha: f64, c: CoefficientSequence, noise: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    nl_arch_inf(alpha, c, Transform::Identity, noise, phi)
}

// ---------------------------------------------------------------------------
// Models with linear input

struct LinearInput {
    weight: f64,
    transform: Transform,
    c: Vec<f64>,
    coeffs: CoefficientSequence,
    noise: Sampler,
}

impl ChainMap for LinearInput {
    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        innovation.values[0] = self.noise.sample(rng);
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        let input = weighted_sum(&self.c, &self.coeffs, Transform::Identity, past);
        out[0] = self.weight * self.transform.apply(input) + innovation.values[0];
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        self.noise.orlicz_norm(phi)
    }

    fn stationary_mean(&self) -> Option<f64> {
        let s = self.weight * self.coeffs.sum();
        (self.transform == Transform::Identity && self.coeffs.has_finite_support()).then(|| self.noise.mean() / (1.0 - s))
    }

    fn long_run_variance(&self) -> Option<f64> {
        let s = self.weight * self.coeffs.sum();
        (self.transform == Transform::Identity && self.coeffs.has_finite_support()).then(|| self.noise.variance() / ((1.0 - s) * (1.0 - s)))
    }

    fn density_info(&self) -> Option<DensityInfo> {
        Some(DensityInfo { det_lower: 1.0, innovation_density_sup: self.noise.density_sup()? })
    }
}

/// `X_t = f(A_t, xi_t)` with `A_t = sum_j c_j X_{t-j}` and
/// `f(t, s) = weight * g(t) + s`, so `L = |weight|` and `a_j = L c_j`.
pub fn linear_input(weight: f64, transform: Transform, c: CoefficientSequence, noise: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    if !weight.is_finite() {
        return Err(Error::domain("weight must be finite"));
    }
    c.validate()?;
    noise.validate()?;
    let lip = weight.abs() * transform.lipschitz();
    let coeffs = c.scaled(lip)?;
    let map = LinearInput { weight, transform, c: cache(&c), coeffs: c, noise };
    ChainModel::contractive("linear_input", Arc::new(map), coeffs, phi)
}

// ---------------------------------------------------------------------------
// Affine models

/// The volatility `M(past)` of an affine model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Volatility {
    /// `M = value > 0`.
    Constant { value: f64 },
    /// `M = sqrt(omega + sum_i alpha_i x_i^2)`, Lipschitz in `x_i` with
    /// constant `sqrt(alpha_i)` and bounded below by `sqrt(omega)`.
    Arch { omega: f64, alphas: Vec<f64> },
}

impl Volatility {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Volatility::Constant { value } => *value > 0.0 && value.is_finite(),
            Volatility::Arch { omega, alphas } => *omega > 0.0 && omega.is_finite() && alphas.iter().all(|a| *a >= 0.0 && a.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid volatility {self:?}")))
        }
    }

    fn eval(&self, past: &Past<'_>) -> f64 {
        match self {
            Volatility::Constant { value } => *value,
            Volatility::Arch { omega, alphas } => {
                let s: f64 = alphas.iter().enumerate().map(|(i, a)| a * past.scalar(i + 1).powi(2)).sum();
                (omega + s).sqrt()
            }
        }
    }

    fn lipschitz(&self) -> Vec<f64> {
        match self {
            Volatility::Constant { .. } => Vec::new(),
            Volatility::Arch { alphas, .. } => alphas.iter().map(|a| a.sqrt()).collect(),
        }
    }

    /// `M_ = inf_past M(past)`.
    pub fn lower(&self) -> f64 {
        match self {
            Volatility::Constant { value } => *value,
            Volatility::Arch { omega, .. } => omega.sqrt(),
        }
    }

    fn at_origin(&self) -> f64 {
        self.lower()
    }
}

struct Affine {
    volatility: Volatility,
    drift: Vec<f64>,
    noise: Sampler,
}

impl ChainMap for Affine {
    fn sample_innovation(&self, rng: &mut dyn RngCore, innovation: &mut Innovation) {
        innovation.values[0] = self.noise.sample(rng);
    }

    fn apply(&self, past: &Past<'_>, innovation: &Innovation, out: &mut [f64]) {
        let f: f64 = self.drift.iter().enumerate().map(|(i, w)| w * past.scalar(i + 1)).sum();
        out[0] = self.volatility.eval(past) * innovation.values[0] + f;
    }

    fn origin_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        self.noise.orlicz_norm(phi).map(|v| self.volatility.at_origin() * v)
    }

    fn stationary_mean(&self) -> Option<f64> {
        let s: f64 = self.drift.iter().sum();
        match self.volatility {
            Volatility::Constant { value } => Some(value * self.noise.mean() / (1.0 - s)),
            Volatility::Arch { .. } => (self.noise.mean() == 0.0).then_some(0.0),
        }
    }

    fn long_run_variance(&self) -> Option<f64> {
        let s: f64 = self.drift.iter().sum();
        match &self.volatility {
            Volatility::Constant { value } => Some(value * value * self.noise.variance() / ((1.0 - s) * (1.0 - s))),
            Volatility::Arch { omega, alphas } => {
                // Without drift and with centred noise the chain is a
                // martingale difference sequence and sigma^2 = E X^2.
                if self.noise.mean() != 0.0 || self.drift.iter().any(|w| *w != 0.0) {
                    return None;
                }
                let s2 = self.noise.variance();
                let total: f64 = alphas.iter().sum();
                (s2 * total < 1.0).then(|| s2 * omega / (1.0 - s2 * total))
            }
        }
    }

    fn density_info(&self) -> Option<DensityInfo> {
        Some(DensityInfo { det_lower: self.volatility.lower(), innovation_density_sup: self.noise.density_sup()? })
    }
}

/// `X_t = M(past) xi_t + f(past)` with `f(past) = sum_i drift_i x_i`, so
/// `a_i = ||xi||_Phi Lip M_i + |drift_i|`.
pub fn affine_model(volatility: Volatility, drift: Vec<f64>, noise: Sampler, phi: OrliczFunction) -> Result<ChainModel> {
    volatility.validate()?;
    if drift.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("drift coefficients must be finite"));
    }
    let norm = innovation_norm(&noise, &phi)?;
    let lip_m = volatility.lipschitz();
    let order = lip_m.len().max(drift.len());
    let values: Vec<f64> = (0..order)
        .map(|i| norm.value * lip_m.get(i).copied().unwrap_or(0.0) + drift.get(i).map_or(0.0, |w| w.abs()))
        .collect();
    let coeffs = CoefficientSequence::finite(values)?;
    let map = Affine { volatility, drift, noise };
    Ok(ChainModel::contractive("affine", Arc::new(map), coeffs, phi)?.with_coeffs_provenance(norm.provenance))
}

// ---------------------------------------------------------------------------
// Declarative specifications

/// A catalogue model described by data, as read from configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    NonlinearAr { terms: Vec<LagTerm>, noise: Sampler },
    Sre { a: Sampler, b: Sampler },
    GaltonWatson { offspring: Sampler, immigration: Sampler, variant: GwVariant },
    NlArch { alpha: f64, coeffs: CoefficientSequence, transform: Transform, noise: Sampler },
    LinearInput { weight: f64, transform: Transform, coeffs: CoefficientSequence, noise: Sampler },
    Affine { volatility: Volatility, drift: Vec<f64>, noise: Sampler },
}

impl ModelSpec {
    pub fn build(&self, phi: OrliczFunction) -> Result<ChainModel> {
        match self {
            ModelSpec::NonlinearAr { terms, noise } => nonlinear_ar_terms(terms, *noise, phi),
            ModelSpec::Sre { a, b } => sre_random_affine(*a, *b, phi),
            ModelSpec::GaltonWatson { offspring, immigration, variant } => galton_watson_immigration(*offspring, *immigration, *variant, phi),
            ModelSpec::NlArch { alpha, coeffs, transform, noise } => nl_arch_inf(*alpha, coeffs.clone(), *transform, *noise, phi),
            ModelSpec::LinearInput { weight, transform, coeffs, noise } => linear_input(*weight, *transform, coeffs.clone(), *noise, phi),
            ModelSpec::Affine { volatility, drift, noise } => affine_model(volatility.clone(), drift.clone(), *noise, phi),
        }
    }
}

/// Provenance combining several inputs: empirical if any input is.
pub fn combined_provenance(items: &[Provenance]) -> Provenance {
    items.iter().copied().fold(Provenance::ClosedForm, worst)
}
