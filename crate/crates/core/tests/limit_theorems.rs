//! Limit-theorem diagnostics on catalogue models.

mod common;

use common::{catalogue, L1};
use infmem_core::models::{affine_model, ar1, nonlinear_ar_terms, Volatility};
use infmem_core::numeric::median;
use infmem_core::stats::{
    clt_test, default_setup, density_bound_check, estimate_long_run_variance, ks_statistic, sip_lil_diagnostic, slln_diagnostic, stationary_path,
    Bandwidth, LrvMethod, Thresholds,
};
use infmem_core::{Sampler, Sequential};

#[test]
fn running_means_settle() {
    // |mean(n) - mean(10 n)| over n = 10^2 .. 10^4, median of 30 paths.
    for m in catalogue() {
        let setup = default_setup(&m).unwrap();
        let mut diffs = vec![Vec::new(); 2];
        for rep in 0..30 {
            let xs = stationary_path(&m, setup, 100_000, 8, rep).unwrap();
            let mean = |n: usize| xs[..n].iter().sum::<f64>() / n as f64;
            for (i, n) in [100usize, 1000].into_iter().enumerate() {
                diffs[i].push((mean(n) - mean(10 * n)).abs());
            }
        }
        let med: Vec<f64> = diffs.iter().map(|d| median(d)).collect();
        assert!(med[1] < med[0], "{}: {med:?}", m.name());
    }
}

#[test]
fn clt_p_values_are_uniform() {
    let iid = nonlinear_ar_terms(&[], Sampler::standard_normal(), L1).unwrap();
    let th = Thresholds::default();
    let ps: Vec<f64> = (0..200).map(|seed| clt_test(&iid, 5, 500, None, &[1.0], seed, &th, &Sequential).unwrap().values("p_value")[0]).collect();
    let (_, p) = ks_statistic(&ps, |x| x.clamp(0.0, 1.0)).unwrap();
    assert!(p > 0.01, "meta p-value {p}");
}

#[test]
fn slln_ar1_decreasing() {
    let m = ar1(0.5, Sampler::standard_normal()).unwrap();
    let r = slln_diagnostic(&m, 1.5, &[1000, 10_000, 100_000], 200, 4, &Sequential).unwrap();
    assert!(r.pass);
}

#[test]
fn clt_ar1_passes() {
    let m = ar1(0.5, Sampler::standard_normal()).unwrap();
    let r = clt_test(&m, 2000, 1000, Some(4.0), &[0.25, 0.5, 1.0], 6, &Thresholds::default(), &Sequential).unwrap();
    assert!(r.pass, "{:?}", r.rows);
    assert!(r.values("ks_distance").iter().all(|d| *d < 0.05));
}

#[test]
fn lil_ar1_in_band() {
    let m = ar1(0.5, Sampler::standard_normal()).unwrap();
    let r = sip_lil_diagnostic(&m, None, 100_000, 100, 12, &Thresholds::default(), &Sequential).unwrap();
    assert!(r.pass, "{:?}", r.rows);
    assert_eq!(r.centering.unwrap().sigma2.unwrap().value, 4.0);
}

#[test]
fn lrv_methods_on_nonlinear_model() {
    // No closed form here; the two estimators should still agree.
    let m = &catalogue()[1];
    let a = estimate_long_run_variance(m, LrvMethod::default(), 200_000, 3).unwrap().value;
    let b = estimate_long_run_variance(m, LrvMethod::BatchMeans { batch_len: None }, 200_000, 3).unwrap().value;
    assert!((a / b - 1.0).abs() < 0.2, "{a} vs {b}");
}

#[test]
fn density_verdict_scale_invariant() {
    // X -> lambda X maps omega to lambda^2 omega and keeps drift and alphas;
    // the KDE sup and the bound both scale as 1/lambda.
    let th = Thresholds { kde_slack: 0.0, ..Thresholds::default() };
    for &(omega, alpha, drift) in &[(0.1, 0.3, 0.0), (0.1, 0.3, 0.4), (1.0, 0.0, 0.5)] {
        let run = |lambda: f64| {
            let vol = Volatility::Arch { omega: lambda * lambda * omega, alphas: vec![alpha] };
            let m = affine_model(vol, vec![drift], Sampler::standard_normal(), L1).unwrap();
            let r = density_bound_check(&m, 1, 20_000, Bandwidth::Silverman, 2, &th).unwrap();
            (r.values("kde_sup")[0] * lambda, r.values("bound")[0] * lambda, r.pass)
        };
        let base = run(1.0);
        for lambda in [0.1, 7.0] {
            let (sup, bound, pass) = run(lambda);
            assert!((sup / base.0 - 1.0).abs() < 1e-6, "{sup} vs {}", base.0);
            assert!((bound / base.1 - 1.0).abs() < 1e-12);
            assert_eq!(pass, base.2);
        }
    }
}
