//! SLLN, CLT and LIL diagnostics on replicated stationary paths, and the
//! KDE check of the joint-density bound for affine models.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::kde::{Bandwidth, Kde1, Kde2};
use super::ks::ks_statistic;
use super::{default_setup, resolve_centering, row, stationary_path, LimitTheoremReport, Theorem, Thresholds};
use crate::error::{Error, Result};
use crate::model::ChainModel;
use crate::numeric::{median, normal_cdf, quantile};
use crate::replicate::Replicator;
use crate::simulate::{run_truncated, SimulationPlan, DEFAULT_STATE_CAP};

/// `sigma^2` at or below this is treated as degenerate.
pub const SIGMA2_FLOOR: f64 = 1e-12;

/// Smallest `k` on the dyadic grid of the LIL diagnostic (`ln ln k` must be
/// comfortably positive).
pub const LIL_K_MIN: usize = 16;

fn plan_for(model: &ChainModel, horizon: usize, reps: usize, seed: u64) -> Result<SimulationPlan> {
    let setup = default_setup(model)?;
    let plan = SimulationPlan { p: setup.p, burn_in: setup.burn_in, horizon, replications: reps, seed };
    plan.validate(DEFAULT_STATE_CAP)?;
    Ok(plan)
}

/// Partial sums `S_k = sum_{i<=k} (X_i - mean)` read off at the sorted
/// `checkpoints`, one vector per replication.
fn partial_sums<R: Replicator>(model: &ChainModel, plan: &SimulationPlan, mean: f64, checkpoints: &[usize], replicator: &R) -> Result<Vec<Vec<f64>>> {
    replicator.try_map(plan.replications, |rep| {
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut s = 0.0;
        let mut next = 0;
        run_truncated(model, plan, rep, |t, x| {
            s += x[0] - mean;
            while next < checkpoints.len() && checkpoints[next] == t {
                out.push(s);
                next += 1;
            }
        })?;
        Ok(out)
    })
}

/// Medians over replications of `|n^{-1/q} S_n|` along `n_grid`. Passes iff
/// the medians strictly decrease.
pub fn slln_diagnostic<R: Replicator>(model: &ChainModel, q: f64, n_grid: &[usize], reps: usize, seed: u64, replicator: &R) -> Result<LimitTheoremReport> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::precondition(format!("SLLN exponent q = {q} must lie in (1, 2)")));
    }
    if n_grid.is_empty() || n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n_grid must be strictly increasing and positive"));
    }
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }
    let n_max = *n_grid.last().unwrap();
    let plan = plan_for(model, n_max, reps, seed)?;
    let setup = default_setup(model)?;
    let centering = resolve_centering(model, setup, n_max, None, false, seed)?;
    let sums = partial_sums(model, &plan, centering.mean.value, n_grid, replicator)?;

    let medians: Vec<f64> = (0..n_grid.len())
        .map(|i| {
            let scale = (n_grid[i] as f64).powf(-1.0 / q);
            let v: Vec<f64> = sums.iter().map(|s| (s[i] * scale).abs()).collect();
            median(&v)
        })
        .collect();
    let mut rows = Vec::new();
    for (n, m) in n_grid.iter().zip(&medians) {
        rows.push(row("median", *n as f64, *m));
    }
    for (w, n) in medians.windows(2).zip(&n_grid[1..]) {
        let ratio = if w[0] > 0.0 { w[1] / w[0] } else { f64::NAN };
        rows.push(row("ratio", *n as f64, ratio));
    }
    let pass = medians.windows(2).all(|w| w[1] < w[0]);
    let mut notes = vec![format!("E X_0 = {} ({:?})", centering.mean.value, centering.mean.provenance)];
    let geometric = n_grid.windows(3).all(|w| {
        let (r1, r2) = (w[1] as f64 / w[0] as f64, w[2] as f64 / w[1] as f64);
        (r1 / r2 - 1.0).abs() < 1e-9
    });
    if !geometric {
        notes.push(String::from("n_grid is not geometric; ratios are not comparable across steps"));
    }
    if n_grid.len() < 2 {
        notes.push(String::from("a single grid point cannot show decrease"));
    }
    Ok(LimitTheoremReport { theorem: Theorem::Slln { q }, rows, thresholds: Thresholds::default(), centering: Some(centering), pass: pass && n_grid.len() >= 2, notes })
}

/// KS comparison of `S_{[nt]} / sqrt(n sigma^2 t)` over replications with
/// the standard normal, for each `t` in `t_grid`. Passes iff every p-value
/// exceeds `thresholds.ks_alpha`.
#[allow(clippy::too_many_arguments)]
pub fn clt_test<R: Replicator>(
    model: &ChainModel,
    n: usize,
    reps: usize,
    sigma2: Option<f64>,
    t_grid: &[f64],
    seed: u64,
    thresholds: &Thresholds,
    replicator: &R,
) -> Result<LimitTheoremReport> {
    thresholds.validate()?;
    if reps < 500 {
        return Err(Error::precondition(format!("CLT test needs at least 500 replications (got {reps})")));
    }
    if t_grid.is_empty() {
        return Err(Error::domain("t_grid is empty"));
    }
    let mut ks: Vec<usize> = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::domain(format!("t = {t} is outside (0, 1]")));
        }
        let k = (n as f64 * t).floor() as usize;
        if k == 0 {
            return Err(Error::domain(format!("[n t] = 0 at n = {n}, t = {t}")));
        }
        ks.push(k);
    }
    let setup = default_setup(model)?;
    let centering = resolve_centering(model, setup, n, sigma2, true, seed)?;
    let s2 = centering.sigma2.unwrap();
    if !(s2.value > SIGMA2_FLOOR) {
        return Err(Error::precondition(format!("sigma^2 = {} is degenerate; the CLT limit is not a proper Gaussian", s2.value)));
    }
    let mut checkpoints = ks.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let plan = plan_for(model, *checkpoints.last().unwrap(), reps, seed)?;
    let sums = partial_sums(model, &plan, centering.mean.value, &checkpoints, replicator)?;

    let mut rows = Vec::new();
    let mut pass = true;
    for (&t, &k) in t_grid.iter().zip(&ks) {
        let idx = checkpoints.binary_search(&k).unwrap();
        let scale = 1.0 / (n as f64 * s2.value * t).sqrt();
        let z: Vec<f64> = sums.iter().map(|s| s[idx] * scale).collect();
        let (d, p) = ks_statistic(&z, normal_cdf)?;
        rows.push(row("ks_distance", t, d));
        rows.push(row("p_value", t, p));
        pass &= p > thresholds.ks_alpha;
    }
    let notes = vec![
        format!("E X_0 = {} ({:?})", centering.mean.value, centering.mean.provenance),
        format!("sigma^2 = {} ({:?})", s2.value, s2.source),
    ];
    Ok(LimitTheoremReport { theorem: Theorem::Clt, rows, thresholds: *thresholds, centering: Some(centering), pass, notes })
}

/// Distribution over replications of
/// `R = max_{k dyadic, 16 <= k <= n} |S_k| / sqrt(2 sigma^2 k ln ln k)`.
/// Passes iff the `thresholds.lil_quantile` quantile lies in
/// `thresholds.lil_band`.
#[allow(clippy::too_many_arguments)]
pub fn sip_lil_diagnostic<R: Replicator>(
    model: &ChainModel,
    sigma2: Option<f64>,
    n: usize,
    reps: usize,
    seed: u64,
    thresholds: &Thresholds,
    replicator: &R,
) -> Result<LimitTheoremReport> {
    thresholds.validate()?;
    if n < 1000 {
        return Err(Error::precondition(format!("LIL diagnostic needs n >= 1000 (got {n})")));
    }
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }
    let setup = default_setup(model)?;
    let centering = resolve_centering(model, setup, n, sigma2, true, seed)?;
    let s2 = centering.sigma2.unwrap();
    if !(s2.value > SIGMA2_FLOOR) {
        return Err(Error::precondition(format!("sigma^2 = {} is degenerate; the LIL normalisation is undefined", s2.value)));
    }
    let grid: Vec<usize> = (4..usize::BITS).map(|j| 1usize << j).take_while(|k| *k <= n).collect();
    debug_assert_eq!(grid[0], LIL_K_MIN);
    let plan = plan_for(model, n, reps, seed)?;
    let sums = partial_sums(model, &plan, centering.mean.value, &grid, replicator)?;
    let norms: Vec<f64> = grid.iter().map(|&k| (2.0 * s2.value * k as f64 * (k as f64).ln().ln()).sqrt()).collect();
    let r: Vec<f64> = sums.iter().map(|s| s.iter().zip(&norms).map(|(x, d)| x.abs() / d).fold(0.0, f64::max)).collect();

    let q = quantile(&r, thresholds.lil_quantile);
    let rows = vec![
        row("r_quantile", thresholds.lil_quantile, q),
        row("r_median", 0.5, median(&r)),
        row("r_max", 1.0, r.iter().cloned().fold(0.0, f64::max)),
    ];
    let pass = q >= thresholds.lil_band.0 && q <= thresholds.lil_band.1;
    let notes = vec![
        String::from("the SIP's Gaussian partner needs an enlarged probability space and is not simulated; only the LIL band implied by it is checked"),
        format!("sigma^2 = {} ({:?})", s2.value, s2.source),
        format!("dyadic grid {}..={}", grid[0], grid[grid.len() - 1]),
    ];
    Ok(LimitTheoremReport { theorem: Theorem::Sip, rows, thresholds: *thresholds, centering: Some(centering), pass, notes })
}

/// Sup of a KDE of the law of `X_1` (`n_joint = 1`) or `(X_1, X_2)`
/// (`n_joint = 2`) from `samples` stationary draws against
/// `M_^{-n} ||f_xi||_inf^n (1 + delta)`.
pub fn density_bound_check(model: &ChainModel, n_joint: usize, samples: usize, bandwidth: Bandwidth, seed: u64, thresholds: &Thresholds) -> Result<LimitTheoremReport> {
    thresholds.validate()?;
    if n_joint != 1 && n_joint != 2 {
        return Err(Error::domain(format!("n_joint must be 1 or 2 (got {n_joint})")));
    }
    if model.state_dim() != 1 {
        return Err(Error::precondition("density check needs a scalar model"));
    }
    let info = model.density_info().ok_or_else(|| Error::precondition(format!("model {} exposes no closed-form density constants", model.name())))?;
    if !(info.det_lower > 0.0) {
        return Err(Error::precondition(format!("lower volatility bound {} must be positive", info.det_lower)));
    }
    let setup = default_setup(model)?;
    let xs = stationary_path(model, setup, samples + n_joint - 1, seed, 0)?;
    let nj = n_joint as i32;
    let bound = (info.innovation_density_sup / info.det_lower).powi(nj);
    let allowed = bound * (1.0 + thresholds.kde_slack);
    let (sup, h) = if n_joint == 1 {
        let kde = Kde1::new(&xs, bandwidth)?;
        (kde.sup().1, kde.bandwidth())
    } else {
        let pts: Vec<(f64, f64)> = xs.windows(2).map(|w| (w[0], w[1])).collect();
        let kde = Kde2::new(&pts, bandwidth)?;
        (kde.sup().1, kde.bandwidth().0)
    };
    let rows = vec![row("kde_sup", n_joint as f64, sup), row("bound", n_joint as f64, bound), row("allowed", n_joint as f64, allowed), row("bandwidth", n_joint as f64, h)];
    let notes = vec![String::from("KDE smoothing biases the sup downward; the slack delta only absorbs upward noise")];
    Ok(LimitTheoremReport { theorem: Theorem::Density { n: n_joint }, rows, thresholds: *thresholds, centering: None, pass: sup <= allowed, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::CoefficientSequence;
    use crate::models::{affine_model, ar1, larch, nonlinear_ar_terms, Volatility};
    use crate::orlicz::OrliczFunction;
    use crate::replicate::Sequential;
    use crate::sampler::Sampler;

    fn iid() -> ChainModel {
        nonlinear_ar_terms(&[], Sampler::standard_normal(), OrliczFunction::Power { m: 1.0 }).unwrap()
    }

    #[test]
    fn slln_iid_ratio() {
        let r = slln_diagnostic(&iid(), 1.5, &[100, 1000, 10_000], 400, 3, &Sequential).unwrap();
        assert!(r.pass);
        for ratio in r.values("ratio") {
            assert!((ratio - 10f64.powf(-1.0 / 6.0)).abs() < 0.12, "{ratio}");
        }
    }

    #[test]
    fn slln_rejects_q() {
        assert!(matches!(slln_diagnostic(&iid(), 2.0, &[10, 100], 5, 1, &Sequential), Err(Error::Precondition(_))));
    }

    #[test]
    fn slln_zero_model() {
        let zero = nonlinear_ar_terms(&[], Sampler::Constant { value: 0.0 }, OrliczFunction::Power { m: 1.0 }).unwrap();
        let r = slln_diagnostic(&zero, 1.5, &[10, 100], 5, 1, &Sequential).unwrap();
        assert!(r.values("median").iter().all(|m| *m == 0.0));
        assert!(!r.pass);
    }

    #[test]
    fn clt_iid_and_bounds() {
        let th = Thresholds::default();
        let r = clt_test(&iid(), 50, 500, None, &[1.0], 9, &th, &Sequential).unwrap();
        assert_eq!(r.centering.unwrap().sigma2.unwrap().value, 1.0);
        assert!(r.values("ks_distance")[0] < 0.07);
        assert!(matches!(clt_test(&iid(), 50, 499, None, &[1.0], 9, &th, &Sequential), Err(Error::Precondition(_))));
        assert!(matches!(clt_test(&iid(), 50, 500, None, &[0.01], 9, &th, &Sequential), Err(Error::Domain(_))));
        assert!(matches!(clt_test(&iid(), 50, 500, Some(0.0), &[1.0], 9, &th, &Sequential), Err(Error::Precondition(_))));
    }

    #[test]
    fn lil_iid_in_band() {
        let r = sip_lil_diagnostic(&iid(), None, 20_000, 200, 5, &Thresholds::default(), &Sequential).unwrap();
        assert!(r.pass, "{:?}", r.rows);
    }

    #[test]
    fn density_ar1() {
        let m = ar1(0.5, Sampler::standard_normal()).unwrap();
        let th = Thresholds::default();
        let one = density_bound_check(&m, 1, 50_000, Bandwidth::Silverman, 2, &th).unwrap();
        assert!(one.pass);
        let sup = one.values("kde_sup")[0];
        assert!((sup - 1.0 / (2.0 * core::f64::consts::PI * 4.0 / 3.0).sqrt()).abs() < 0.02, "{sup}");
        let two = density_bound_check(&m, 2, 50_000, Bandwidth::Silverman, 2, &th).unwrap();
        assert!((two.values("bound")[0] - 1.0 / (2.0 * core::f64::consts::PI)).abs() < 1e-12);
        assert!(two.pass);
    }

    #[test]
    fn density_needs_constants() {
        let m = larch(1.0, CoefficientSequence::geometric(0.3, 0.5).unwrap(), Sampler::Uniform { low: -1.0, high: 1.0 }, OrliczFunction::Power { m: 1.0 }).unwrap();
        assert!(matches!(density_bound_check(&m, 1, 1000, Bandwidth::Silverman, 1, &Thresholds::default()), Err(Error::Precondition(_))));
        let v = affine_model(Volatility::Constant { value: 1.0 }, vec![0.0], Sampler::standard_normal(), OrliczFunction::Power { m: 1.0 }).unwrap();
        assert!(matches!(density_bound_check(&v, 3, 1000, Bandwidth::Silverman, 1, &Thresholds::default()), Err(Error::Domain(_))));
    }
}
