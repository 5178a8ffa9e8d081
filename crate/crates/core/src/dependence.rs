//! Coupling-gap estimates `E|X_r - X*_r|` of the tau coefficients.
//!
//! The coupled copy `X*` shares the innovations of `X` after time 0 and uses
//! independent ones before. The gap is an upper bound for `tau(r)` and is
//! what the bound is proved for, so it is what gets compared.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::bounds::{tau_bounds, TauBound};
use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::model::{euclidean_diff, ChainModel};
use crate::numeric::{mean, ols_slope, variance};
use crate::orlicz::OrliczFunction;
use crate::replicate::Replicator;
use crate::simulate::{choose_truncation, CoupledRun, SimulationPlan, DEFAULT_STATE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauEstimate {
    pub r: usize,
    /// Mean coupling gap over replications.
    pub mean_abs_gap: f64,
    /// Half-width of the 95% normal confidence interval.
    pub ci_halfwidth: f64,
    pub n_reps: usize,
}

/// The coupled-pair plan used when none is given: truncation and burn-in
/// from [`choose_truncation`] with `Phi = Power(1)` and
/// `eps = tau_bound(r_max) / 100`.
pub fn default_coupling_plan(model: &ChainModel, r_max: usize, replications: usize, seed: u64) -> Result<SimulationPlan> {
    let bound = tau_bounds(model.coeffs(), model.mu_1().value, &[r_max.max(1)])?[0].value;
    let (p, burn_in) = if bound > 0.0 {
        let t = choose_truncation(model, &OrliczFunction::Power { m: 1.0 }, bound / 100.0)?;
        (t.p, t.burn_in)
    } else {
        (model.coeffs().order().unwrap_or(1).max(1), 0)
    };
    SimulationPlan::new(p, burn_in, r_max.max(1), replications, seed)
}

/// Mean coupling gaps at each `r` in `r_list` over `plan.replications`
/// coupled pairs. The plan's horizon is extended to `max(r_list)`.
pub fn estimate_tau<R: Replicator>(model: &ChainModel, r_list: &[usize], plan: &SimulationPlan, replicator: &R) -> Result<Vec<TauEstimate>> {
    if r_list.is_empty() || r_list.contains(&0) {
        return Err(Error::domain("r_list must be nonempty with every r >= 1"));
    }
    let r_max = *r_list.iter().max().unwrap();
    let plan = SimulationPlan { horizon: r_max, ..*plan };
    plan.validate(DEFAULT_STATE_CAP)?;
    let per_rep = replicator.try_map(plan.replications, |rep| {
        let mut run = CoupledRun::new(model, &plan, rep)?;
        let mut gaps = vec![0.0; r_max];
        run.run(|t, x, y| gaps[t - 1] = euclidean_diff(x, y))?;
        Ok(r_list.iter().map(|&r| gaps[r - 1]).collect::<Vec<f64>>())
    })?;
    let n = plan.replications;
    Ok(r_list
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let xs: Vec<f64> = per_rep.iter().map(|g| g[i]).collect();
            TauEstimate { r, mean_abs_gap: mean(&xs), ci_halfwidth: 1.96 * (variance(&xs) / n as f64).sqrt(), n_reps: n }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub r: usize,
    pub estimate: f64,
    pub ci: f64,
    pub bound: f64,
    pub argmin_p: usize,
    /// `estimate / bound` (0 when both vanish).
    pub ratio: f64,
    /// `estimate - ci <= bound`.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Least-squares slope of `ln estimate` against `r` (nonpositive for a
    /// decaying gap); `None` when some estimate is zero.
    pub log_slope: Option<f64>,
    pub pass: bool,
}

/// Compares estimates with precomputed bounds on the same `r` grid.
pub fn compare_to_bounds(estimates: &[TauEstimate], bounds: &[TauBound]) -> Result<ComparisonReport> {
    if estimates.len() != bounds.len() || estimates.iter().zip(bounds).any(|(e, b)| e.r != b.r) {
        return Err(Error::precondition(format!(
            "estimate grid {:?} does not match bound grid {:?}",
            estimates.iter().map(|e| e.r).collect::<Vec<_>>(),
            bounds.iter().map(|b| b.r).collect::<Vec<_>>()
        )));
    }
    let rows: Vec<ComparisonRow> = estimates
        .iter()
        .zip(bounds)
        .map(|(e, b)| {
            let ratio = if e.mean_abs_gap == 0.0 { 0.0 } else { e.mean_abs_gap / b.value };
            ComparisonRow { r: e.r, estimate: e.mean_abs_gap, ci: e.ci_halfwidth, bound: b.value, argmin_p: b.argmin_p, ratio, pass: e.mean_abs_gap - e.ci_halfwidth <= b.value }
        })
        .collect();
    let log_slope = (rows.len() >= 2 && rows.iter().all(|r| r.estimate > 0.0)).then(|| {
        let x: Vec<f64> = rows.iter().map(|r| r.r as f64).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.estimate.ln()).collect();
        ols_slope(&x, &y)
    });
    let pass = rows.iter().all(|r| r.pass);
    Ok(ComparisonReport { rows, log_slope, pass })
}

/// Compares estimates with the tau(r) bound for `coeffs` and `mu_1`.
pub fn compare_to_bound(estimates: &[TauEstimate], coeffs: &CoefficientSequence, mu_1: f64) -> Result<ComparisonReport> {
    let rs: Vec<usize> = estimates.iter().map(|e| e.r).collect();
    let bounds = tau_bounds(coeffs, mu_1, &rs)?;
    compare_to_bounds(estimates, &bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ar1, nonlinear_ar_terms};
    use crate::replicate::Sequential;
    use crate::sampler::Sampler;

    #[test]
    fn iid_gap_is_zero() {
        let m = nonlinear_ar_terms(&[], Sampler::standard_normal(), OrliczFunction::Power { m: 1.0 }).unwrap();
        let plan = default_coupling_plan(&m, 5, 200, 1).unwrap();
        let est = estimate_tau(&m, &[1, 2, 5], &plan, &Sequential).unwrap();
        assert!(est.iter().all(|e| e.mean_abs_gap == 0.0 && e.ci_halfwidth == 0.0));
        let cmp = compare_to_bound(&est, m.coeffs(), m.mu_1().value).unwrap();
        assert!(cmp.pass && cmp.rows.iter().all(|r| r.ratio == 0.0));
    }

    #[test]
    fn ar1_gap_constant() {
        let m = ar1(0.5, Sampler::standard_normal()).unwrap();
        let rs: Vec<usize> = (1..=10).collect();
        let plan = default_coupling_plan(&m, 10, 4000, 7).unwrap();
        let est = estimate_tau(&m, &rs, &plan, &Sequential).unwrap();
        let expected = 4.0 / (3.0 * core::f64::consts::PI).sqrt();
        for e in &est {
            let scaled = e.mean_abs_gap / 0.5f64.powi(e.r as i32);
            assert!((scaled - expected).abs() < 0.1, "r = {}: {scaled}", e.r);
        }
        let cmp = compare_to_bound(&est, m.coeffs(), m.mu_1().value).unwrap();
        assert!(cmp.pass);
        assert!(cmp.log_slope.unwrap() < 0.0);
        for row in &cmp.rows {
            assert!((row.ratio - expected / (4.0 * (2.0 / core::f64::consts::PI).sqrt())).abs() < 0.05);
        }
    }

    #[test]
    fn grid_mismatch() {
        let e = [TauEstimate { r: 1, mean_abs_gap: 0.1, ci_halfwidth: 0.0, n_reps: 1 }];
        let b = [TauBound { r: 2, value: 1.0, argmin_p: 1 }];
        assert!(matches!(compare_to_bounds(&e, &b), Err(Error::Precondition(_))));
    }

    #[test]
    fn excess_is_flagged() {
        let e = [TauEstimate { r: 1, mean_abs_gap: 2.0, ci_halfwidth: 0.1, n_reps: 10 }];
        let b = [TauBound { r: 1, value: 1.0, argmin_p: 1 }];
        assert!(!compare_to_bounds(&e, &b).unwrap().pass);
    }
}
