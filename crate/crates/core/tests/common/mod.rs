#![allow(dead_code)]

use infmem_core::models::{
    affine_model, ar1, galton_watson_immigration, larch, linear_input, nl_arch_inf, nonlinear_ar_terms, sre_random_affine, GwVariant, LagTerm,
    Transform, Volatility,
};
use infmem_core::{ChainModel, CoefficientSequence, OrliczFunction, Sampler};

pub const L1: OrliczFunction = OrliczFunction::Power { m: 1.0 };

/// One instance of every catalogue family, with `Phi = Power(1)`.
pub fn catalogue() -> Vec<ChainModel> {
    let normal = Sampler::standard_normal();
    let uniform = Sampler::Uniform { low: -1.0, high: 1.0 };
    let geo = CoefficientSequence::geometric(0.3, 0.5).unwrap();
    vec![
        ar1(0.5, normal).unwrap(),
        nonlinear_ar_terms(
            &[LagTerm { lag: 1, weight: 0.4, transform: Transform::Tanh }, LagTerm { lag: 2, weight: 0.3, transform: Transform::Sin }],
            normal,
            L1,
        )
        .unwrap(),
        sre_random_affine(Sampler::Uniform { low: 0.0, high: 0.8 }, normal, L1).unwrap(),
        galton_watson_immigration(Sampler::Bernoulli { p: 0.4 }, Sampler::Poisson { lambda: 1.0 }, GwVariant::StandardImmigration, L1).unwrap(),
        larch(1.0, geo.clone(), uniform, L1).unwrap(),
        nl_arch_inf(0.5, geo.clone(), Transform::Sin, uniform, L1).unwrap(),
        linear_input(0.8, Transform::Tanh, CoefficientSequence::polynomial(0.3, 3.0).unwrap(), normal, L1).unwrap(),
        affine_model(Volatility::Arch { omega: 0.1, alphas: vec![0.3] }, vec![], normal, L1).unwrap(),
    ]
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / x.len() as f64 - j as f64 / y.len() as f64).abs());
    }
    d
}
