//! Simulation: the zero-started p-Markov truncation
//! `X_{p,t} = F(X_{p,t-1}, ..., X_{p,t-p}, 0, 0, ...; xi_t)`, coupled pairs
//! and the recursive approximation `X~_n = F(X~_{n-1}, ..., X~_1, c; xi_n)`.
//!
//! Time runs over `t = 1 - burn_in, ..., 0` (burn-in) and then
//! `t = 1, ..., horizon` (recorded). Innovations at `t <= 0` come from the
//! burn-in lane and those at `t >= 1` from the main lane of the replication's
//! stream, so two runs with different truncation orders or a run and its
//! coupled copy see the same `xi_t` for `t >= 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChainModel, Innovation, Past};
use crate::orlicz::OrliczFunction;
use crate::rng::{stream, Lane, StreamRng};

/// Default bound on `horizon * replications`.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000_000;
/// Largest truncation order [`choose_truncation`] will return.
pub const MAX_ORDER: usize = 1_000_000;
/// Largest burn-in [`choose_truncation`] will return.
pub const MAX_BURN_IN: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationPlan {
    pub p: usize,
    pub burn_in: usize,
    pub horizon: usize,
    pub replications: usize,
    pub seed: u64,
}

impl SimulationPlan {
    pub fn new(p: usize, burn_in: usize, horizon: usize, replications: usize, seed: u64) -> Result<Self> {
        let plan = SimulationPlan { p, burn_in, horizon, replications, seed };
        plan.validate(DEFAULT_STATE_CAP)?;
        Ok(plan)
    }

    /// Checks counts and the resource cap on `horizon * replications`.
    pub fn validate(&self, state_cap: u64) -> Result<()> {
        if self.p == 0 || self.horizon == 0 || self.replications == 0 {
            return Err(Error::domain(format!("p, horizon and replications must be at least 1 (got {}, {}, {})", self.p, self.horizon, self.replications)));
        }
        let total = (self.horizon as u64).saturating_mul(self.replications as u64);
        if total > state_cap {
            return Err(Error::Capacity(format!("horizon x replications = {total} exceeds the cap of {state_cap} state values")));
        }
        Ok(())
    }

    /// The recommendation `p <= burn_in` does not hold.
    pub fn short_burn_in(&self) -> bool {
        self.p > self.burn_in
    }
}

/// A recorded path `X_1, ..., X_horizon` (state-major, `dim` values each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub model: String,
    pub plan: SimulationPlan,
    pub replication: u64,
    pub dim: usize,
    /// `X_0`, the last burn-in state (zero without burn-in).
    pub initial: Vec<f64>,
    pub values: Vec<f64>,
}

impl SamplePath {
    /// Number of recorded states.
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X_t` for `t` in `1..=len`.
    pub fn state(&self, t: usize) -> &[f64] {
        &self.values[(t - 1) * self.dim..t * self.dim]
    }

    /// First coordinate of every state.
    pub fn scalar(&self) -> Vec<f64> {
        self.values.iter().step_by(self.dim).copied().collect()
    }
}

/// The last `p` states of a running chain in a reusable buffer.
struct Window {
    buf: Vec<f64>,
    start: usize,
    end: usize,
    p: usize,
    dim: usize,
}

impl Window {
    fn new(p: usize, dim: usize) -> Self {
        let cap = (4 * p).max(64) * dim;
        Window { buf: vec![0.0; cap], start: 0, end: 0, p, dim }
    }

    fn past(&self) -> Past<'_> {
        Past::new(&self.buf[self.start..self.end], self.dim).truncated(self.p)
    }

    fn push(&mut self, x: &[f64]) {
        let d = self.dim;
        if self.end + d > self.buf.len() {
            let keep = self.end - self.start;
            self.buf.copy_within(self.start..self.end, 0);
            self.start = 0;
            self.end = keep;
        }
        self.buf[self.end..self.end + d].copy_from_slice(x);
        self.end += d;
        if self.end - self.start > self.p * d {
            self.start += d;
        }
    }

    fn last(&self) -> &[f64] {
        if self.end == self.start {
            &[]
        } else {
            &self.buf[self.end - self.dim..self.end]
        }
    }
}

fn check_finite(model: &ChainModel, x: &[f64], t: i64) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric { message: format!("model {} produced a non-finite state at t = {t}", model.name()), best: None })
    }
}

/// Runs the truncated chain through its burn-in and hands each recorded
/// state `(t, X_t)` to `visit`. Returns `X_0`.
pub fn run_truncated<V>(model: &ChainModel, plan: &SimulationPlan, replication: u64, mut visit: V) -> Result<Vec<f64>>
where
    V: FnMut(usize, &[f64]),
{
    if plan.p == 0 {
        return Err(Error::domain("truncation order p must be at least 1"));
    }
    let d = model.state_dim();
    let map = model.map();
    let mut window = Window::new(plan.p, d);
    let mut innovation = Innovation::new(map.innovation_len());
    let mut out = vec![0.0; d];
    let mut rng = stream(plan.seed, replication, Lane::BurnIn);
    for s in 0..plan.burn_in {
        map.sample_innovation(&mut rng, &mut innovation);
        map.apply(&window.past(), &innovation, &mut out);
        check_finite(model, &out, s as i64 + 1 - plan.burn_in as i64)?;
        window.push(&out);
    }
    let initial = if plan.burn_in == 0 { vec![0.0; d] } else { window.last().to_vec() };
    let mut rng = stream(plan.seed, replication, Lane::Main);
    for t in 1..=plan.horizon {
        map.sample_innovation(&mut rng, &mut innovation);
        map.apply(&window.past(), &innovation, &mut out);
        check_finite(model, &out, t as i64)?;
        window.push(&out);
        visit(t, &out);
    }
    Ok(initial)
}

/// One replication of the truncated chain.
pub fn simulate_replication(model: &ChainModel, plan: &SimulationPlan, replication: u64) -> Result<SamplePath> {
    let d = model.state_dim();
    let mut values = Vec::with_capacity(plan.horizon * d);
    let initial = run_truncated(model, plan, replication, |_, x| values.extend_from_slice(x))?;
    Ok(SamplePath { model: String::from(model.name()), plan: *plan, replication, dim: d, initial, values })
}

/// The truncated chain started at zero: `burn_in` discarded steps, then
/// `horizon` recorded states (replication 0 of the plan).
pub fn simulate_truncated(model: &ChainModel, plan: &SimulationPlan) -> Result<SamplePath> {
    plan.validate(DEFAULT_STATE_CAP)?;
    simulate_replication(model, plan, 0)
}

/// Two truncated paths with independent burn-in innovations and shared
/// innovations for `t >= 1`.
pub fn simulate_coupled_pair(model: &ChainModel, plan: &SimulationPlan, replication: u64) -> Result<(SamplePath, SamplePath)> {
    let mut gaps = CoupledRun::new(model, plan, replication)?;
    let d = model.state_dim();
    let mut a = Vec::with_capacity(plan.horizon * d);
    let mut b = Vec::with_capacity(plan.horizon * d);
    gaps.run(|_, x, y| {
        a.extend_from_slice(x);
        b.extend_from_slice(y);
    })?;
    let name = String::from(model.name());
    Ok((
        SamplePath { model: name.clone(), plan: *plan, replication, dim: d, initial: gaps.initial.0, values: a },
        SamplePath { model: name, plan: *plan, replication, dim: d, initial: gaps.initial.1, values: b },
    ))
}

/// Streaming form of [`simulate_coupled_pair`].
pub struct CoupledRun<'m> {
    model: &'m ChainModel,
    plan: SimulationPlan,
    replication: u64,
    /// `(X_0, X*_0)` after [`run`](Self::run).
    pub initial: (Vec<f64>, Vec<f64>),
}

impl<'m> CoupledRun<'m> {
    pub fn new(model: &'m ChainModel, plan: &SimulationPlan, replication: u64) -> Result<Self> {
        if plan.p == 0 {
            return Err(Error::domain("truncation order p must be at least 1"));
        }
        Ok(CoupledRun { model, plan: *plan, replication, initial: (Vec::new(), Vec::new()) })
    }

    fn burn(&self, lane: Lane) -> Result<Window> {
        let model = self.model;
        let map = model.map();
        let d = model.state_dim();
        let mut window = Window::new(self.plan.p, d);
        let mut innovation = Innovation::new(map.innovation_len());
        let mut out = vec![0.0; d];
        let mut rng: StreamRng = stream(self.plan.seed, self.replication, lane);
        for s in 0..self.plan.burn_in {
            map.sample_innovation(&mut rng, &mut innovation);
            map.apply(&window.past(), &innovation, &mut out);
            check_finite(model, &out, s as i64 + 1 - self.plan.burn_in as i64)?;
            window.push(&out);
        }
        Ok(window)
    }

    /// Visits `(t, X_t, X*_t)` for `t = 1..=horizon`.
    pub fn run<V>(&mut self, mut visit: V) -> Result<()>
    where
        V: FnMut(usize, &[f64], &[f64]),
    {
        let model = self.model;
        let map = model.map();
        let d = model.state_dim();
        let mut w1 = self.burn(Lane::BurnIn)?;
        let mut w2 = self.burn(Lane::CopyBurnIn)?;
        let init = |w: &Window| if self.plan.burn_in == 0 { vec![0.0; d] } else { w.last().to_vec() };
        self.initial = (init(&w1), init(&w2));
        let mut innovation = Innovation::new(map.innovation_len());
        let mut x = vec![0.0; d];
        let mut y = vec![0.0; d];
        let mut rng = stream(self.plan.seed, self.replication, Lane::Main);
        for t in 1..=self.plan.horizon {
            map.sample_innovation(&mut rng, &mut innovation);
            map.apply(&w1.past(), &innovation, &mut x);
            map.apply(&w2.past(), &innovation, &mut y);
            check_finite(model, &x, t as i64)?;
            check_finite(model, &y, t as i64)?;
            w1.push(&x);
            w2.push(&y);
            visit(t, &x, &y);
        }
        Ok(())
    }
}

/// `X~_1, ..., X~_n` with `X~_k = F(X~_{k-1}, ..., X~_1, c_1, c_2, ...; xi_k)`.
///
/// `tail` lists `c_1, c_2, ...` (each `dim` values); the tail is zero beyond
/// it. Innovations are the main-lane draws of `(seed, replication)`, the
/// same `xi_1, xi_2, ...` a truncated run with that seed uses.
pub fn recursive_approximation(model: &ChainModel, tail: &[f64], n: usize, seed: u64, replication: u64) -> Result<SamplePath> {
    let d = model.state_dim();
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if !tail.len().is_multiple_of(d) || tail.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!("tail must hold finite states of dimension {d}")));
    }
    let map = model.map();
    let mut history: Vec<f64> = Vec::with_capacity(n * d);
    let mut innovation = Innovation::new(map.innovation_len());
    let mut out = vec![0.0; d];
    let mut rng = stream(seed, replication, Lane::Main);
    for t in 1..=n {
        map.sample_innovation(&mut rng, &mut innovation);
        map.apply(&Past::new(&history, d).with_tail(tail), &innovation, &mut out);
        check_finite(model, &out, t as i64)?;
        history.extend_from_slice(&out);
    }
    let plan = SimulationPlan { p: n.max(1), burn_in: 0, horizon: n, replications: 1, seed };
    Ok(SamplePath { model: String::from(model.name()), plan, replication, dim: d, initial: vec![0.0; d], values: history })
}

/// `sup_i ||c_i||` of a tail.
pub fn tail_sup(tail: &[f64], dim: usize) -> f64 {
    tail.chunks(dim).map(crate::model::euclidean).fold(0.0, f64::max)
}

/// A truncation order and burn-in meeting an error target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub p: usize,
    pub burn_in: usize,
    /// `mu_Phi A(p) / (1 - a)^2`.
    pub truncation_bound: f64,
    /// `mu_Phi a^{burn_in / p}`.
    pub burn_in_bound: f64,
}

/// Smallest `p` with `mu_Phi A(p)/(1-a)^2 <= eps/2` and smallest burn-in with
/// `mu_Phi a^{burn_in/p} <= eps/2`. Finite coefficients give their order.
pub fn choose_truncation(model: &ChainModel, phi: &OrliczFunction, eps: f64) -> Result<Truncation> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("target error {eps} must be positive")));
    }
    let mu = model.mu_phi(phi)?.value;
    truncation_for(model.coeffs(), mu, eps)
}

/// [`choose_truncation`] from the constants alone.
pub fn truncation_for(coeffs: &crate::coeffs::CoefficientSequence, mu: f64, eps: f64) -> Result<Truncation> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("target error {eps} must be positive")));
    }
    let a = coeffs.check_contraction()?;
    if eps == f64::INFINITY {
        return Ok(Truncation { p: 1, burn_in: 0, truncation_bound: mu * coeffs.tail(1) / ((1.0 - a) * (1.0 - a)), burn_in_bound: mu });
    }
    let half = eps / 2.0;
    let gap = |p: usize| mu * coeffs.tail(p) / ((1.0 - a) * (1.0 - a));
    let p = match coeffs.order() {
        Some(order) => order.max(1),
        None => {
            if gap(1) <= half {
                1
            } else {
                let mut hi = 2usize;
                while gap(hi) > half {
                    if hi >= MAX_ORDER {
                        return Err(Error::Capacity(format!("no truncation order up to {MAX_ORDER} reaches error {eps}")));
                    }
                    hi = (hi * 2).min(MAX_ORDER);
                }
                let mut lo = hi / 2;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if gap(mid) <= half {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            }
        }
    };
    let burn = |b: usize| if b == 0 { mu } else { mu * a.powf(b as f64 / p as f64) };
    let burn_in = if mu <= half {
        0
    } else if a == 0.0 {
        1
    } else {
        let guess = (p as f64 * (half / mu).ln() / a.ln()).ceil();
        if !(guess <= MAX_BURN_IN as f64) {
            return Err(Error::Capacity(format!("burn-in for error {eps} exceeds {MAX_BURN_IN} steps")));
        }
        let mut b = (guess as usize).max(1);
        while b > 1 && burn(b - 1) <= half {
            b -= 1;
        }
        while burn(b) > half {
            b += 1;
        }
        b
    };
    Ok(Truncation { p, burn_in, truncation_bound: gap(p), burn_in_bound: burn(burn_in) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::CoefficientSequence;
    use crate::models::{ar1, larch, nonlinear_ar_terms, LagTerm, Transform};
    use crate::numeric::{mean, variance};
    use crate::sampler::Sampler;
    use approx::assert_relative_eq;

    fn plan(p: usize, burn_in: usize, horizon: usize) -> SimulationPlan {
        SimulationPlan::new(p, burn_in, horizon, 1, 42).unwrap()
    }

    #[test]
    fn ar1_stationary_variance() {
        let m = ar1(0.5, Sampler::standard_normal()).unwrap();
        let path = simulate_truncated(&m, &plan(1, 100, 100_000)).unwrap();
        let v = variance(&path.values);
        assert!((v / (4.0 / 3.0) - 1.0).abs() < 0.02, "variance {v}");
    }

    #[test]
    fn deterministic_given_seed() {
        let m = larch(1.0, CoefficientSequence::geometric(0.3, 0.5).unwrap(), Sampler::Uniform { low: -1.0, high: 1.0 }, OrliczFunction::Power { m: 1.0 }).unwrap();
        let a = simulate_truncated(&m, &plan(11, 70, 500)).unwrap();
        let b = simulate_truncated(&m, &plan(11, 70, 500)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn iid_model_is_transformed_noise() {
        let m = nonlinear_ar_terms(&[], Sampler::standard_normal(), OrliczFunction::Power { m: 1.0 }).unwrap();
        let (x, y) = simulate_coupled_pair(&m, &plan(1, 10, 50), 0).unwrap();
        assert_eq!(x.values, y.values);
        assert_ne!(x.initial, y.initial);
    }

    #[test]
    fn ar1_coupling_gap_is_geometric() {
        let m = ar1(0.5, Sampler::standard_normal()).unwrap();
        let (x, y) = simulate_coupled_pair(&m, &plan(1, 50, 20), 3).unwrap();
        let g0 = (x.initial[0] - y.initial[0]).abs();
        for r in 1..=20 {
            let g = (x.state(r)[0] - y.state(r)[0]).abs();
            assert_relative_eq!(g, 0.5f64.powi(r as i32) * g0, max_relative = 1e-9);
        }
    }

    #[test]
    fn recursive_matches_truncated_for_finite_memory() {
        let terms = [LagTerm { lag: 1, weight: 0.3, transform: Transform::Tanh }, LagTerm { lag: 3, weight: 0.2, transform: Transform::Identity }];
        let m = nonlinear_ar_terms(&terms, Sampler::standard_normal(), OrliczFunction::Power { m: 1.0 }).unwrap();
        let rec = recursive_approximation(&m, &[], 30, 8, 0).unwrap();
        let tr = simulate_truncated(&m, &SimulationPlan::new(3, 0, 30, 1, 8).unwrap()).unwrap();
        assert_eq!(rec.values, tr.values);
        let one = recursive_approximation(&m, &[], 1, 8, 0).unwrap();
        assert_eq!(one.values[0], tr.values[0]);
    }

    #[test]
    fn truncation_examples() {
        let c = CoefficientSequence::geometric(0.3, 0.5).unwrap();
        let t = truncation_for(&c, 1.0, 1e-3).unwrap();
        assert_eq!((t.p, t.burn_in), (11, 70));
        let f = CoefficientSequence::finite(alloc::vec![0.2, 0.0, 0.3]).unwrap();
        assert_eq!(truncation_for(&f, 1.0, 1e-9).unwrap().p, 3);
        let inf = truncation_for(&c, 1.0, f64::INFINITY).unwrap();
        assert_eq!((inf.p, inf.burn_in), (1, 0));
        let poly = CoefficientSequence::polynomial(0.05, 1.1).unwrap();
        assert!(matches!(truncation_for(&poly, 1.0, 1e-12), Err(Error::Capacity(_))));
    }

    #[test]
    fn capacity_cap() {
        let p = SimulationPlan { p: 1, burn_in: 0, horizon: 1_000_000, replications: 10_000, seed: 0 };
        assert!(matches!(p.validate(DEFAULT_STATE_CAP), Err(Error::Capacity(_))));
    }

    #[test]
    fn truncation_gap_respects_lemma() {
        // E|X_p - X_{p+1}| <= a_{p+1} mu_1 / (1 - a)^2 on matched innovations.
        let c = CoefficientSequence::geometric(0.6, 0.5).unwrap();
        let m = larch(1.0, c, Sampler::Uniform { low: -1.0, high: 1.0 }, OrliczFunction::Power { m: 1.0 }).unwrap();
        let a = m.a();
        for p in [1usize, 2, 4] {
            let gaps: Vec<f64> = (0..400)
                .map(|rep| {
                    let x = simulate_replication(&m, &SimulationPlan { p, burn_in: 60, horizon: 1, replications: 1, seed: 5 }, rep).unwrap();
                    let y = simulate_replication(&m, &SimulationPlan { p: p + 1, burn_in: 60, horizon: 1, replications: 1, seed: 5 }, rep).unwrap();
                    (x.values[0] - y.values[0]).abs()
                })
                .collect();
            let bound = m.coeffs().coefficient(p + 1) * m.mu_1().value / ((1.0 - a) * (1.0 - a));
            assert!(mean(&gaps) <= bound, "p = {p}: {} > {bound}", mean(&gaps));
        }
    }
}
