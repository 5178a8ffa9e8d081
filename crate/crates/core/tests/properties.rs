//! Property tests over randomly drawn parameters.

use infmem_core::bounds::{
    approx_error_bound, calibrate_rate, check_condition_dp, tau_bound, tau_bound_finite, DpOptions, RateFamily, Verdict,
};
use infmem_core::coeffs::CoefficientSequence;
use infmem_core::orlicz::{estimate_orlicz_norm, phi_tilde_q, phi_tilde_q_bound, Orlicz, OrliczFunction, PhiTildeQuery};
use infmem_core::stats::{estimate_lrv, LrvMethod};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = CoefficientSequence> {
    prop_oneof![
        (0.01f64..0.9, 0.05f64..0.9).prop_map(|(a, g)| CoefficientSequence::geometric(a * (1.0 - g) / g, g).unwrap()),
        (0.01f64..0.9, 1.2f64..5.0).prop_map(|(a, b)| {
            let zeta = CoefficientSequence::polynomial(1.0, b).unwrap().sum();
            CoefficientSequence::polynomial(a / zeta, b).unwrap()
        }),
        prop::collection::vec(0.0f64..0.2, 1..5).prop_map(|v| CoefficientSequence::finite(v).unwrap()),
    ]
}

fn submultiplicative() -> impl Strategy<Value = OrliczFunction> {
    prop_oneof![
        (1.0f64..6.0).prop_map(|m| OrliczFunction::Power { m }),
        (1.0f64..4.0, 0.0f64..3.0).prop_map(|(m, l)| OrliczFunction::PowerLog { m, m_log: l }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_bound_nonincreasing(c in coeffs(), mu in 0.1f64..10.0, r in 1usize..300) {
        let b0 = tau_bound(&c, mu, r).unwrap().value;
        let b1 = tau_bound(&c, mu, r + 1).unwrap().value;
        prop_assert!(b1 <= b0 * (1.0 + 1e-12), "{b1} > {b0}");
    }

    #[test]
    fn finite_support_under_finite_bound(v in prop::collection::vec(0.0f64..0.2, 1..5), mu in 0.1f64..10.0, extra in 0usize..100) {
        let c = CoefficientSequence::finite(v).unwrap();
        let p = c.order().unwrap().max(1);
        let r = p + extra;
        let exact = tau_bound(&c, mu, r).unwrap().value;
        let finite = tau_bound_finite(p, c.sum(), mu, r).unwrap();
        prop_assert!(exact <= finite * (1.0 + 1e-12));
    }

    #[test]
    fn approx_error_shares_argmin(c in coeffs(), x0 in 0.1f64..5.0, cbar in 0.0f64..5.0, r in 1usize..200) {
        let t = tau_bound(&c, 1.0, r).unwrap();
        let e = approx_error_bound(&c, x0, cbar, r).unwrap();
        prop_assert_eq!(t.argmin_p, e.argmin_p);
    }

    #[test]
    fn a_tail_nonincreasing(c in coeffs(), p in 0usize..500) {
        prop_assert!(c.tail(p + 1) <= c.tail(p));
    }

    #[test]
    fn phi_tilde_below_bound(m in prop::sample::select(vec![3.0, 4.0, 6.0]), lx in -3.0f64..3.0) {
        let x = 10f64.powf(lx);
        let q = PhiTildeQuery::new(OrliczFunction::Power { m }, 2.0, x).unwrap();
        let v = phi_tilde_q(&q).unwrap();
        let b = phi_tilde_q_bound(&q).unwrap().lemma;
        prop_assert!(v <= b * (1.0 + 1e-9), "{v} > {b}");
    }

    #[test]
    fn phi_tilde_below_bound_power_log(b in prop::sample::select(vec![0.0, 1.0]), lx in -3.0f64..3.0) {
        let x = 10f64.powf(lx);
        let q = PhiTildeQuery::new(OrliczFunction::power_log_for(2.0, b).unwrap(), 2.0, x).unwrap();
        let v = phi_tilde_q(&q).unwrap();
        let bound = phi_tilde_q_bound(&q).unwrap().lemma;
        prop_assert!(v <= bound * (1.0 + 1e-9), "{v} > {bound}");
    }

    #[test]
    fn phi_tilde_monotone(phi in submultiplicative(), q in 1.1f64..3.0, lx in -3.0f64..2.0, step in 0.0f64..1.0) {
        let x = 10f64.powf(lx);
        let y = x * 10f64.powf(step);
        let a = phi_tilde_q(&PhiTildeQuery::new(phi, q, x).unwrap()).unwrap();
        let b = phi_tilde_q(&PhiTildeQuery::new(phi, q, y).unwrap()).unwrap();
        prop_assert!(b == f64::INFINITY || b >= a - 1e-9 * a.abs().max(1.0), "{a} > {b}");
    }

    #[test]
    fn norm_one_below_phi_norm(phi in submultiplicative(), xs in prop::collection::vec(-50.0f64..50.0, 1..200)) {
        prop_assume!(xs.iter().any(|x| *x != 0.0));
        let one = estimate_orlicz_norm(&xs, &OrliczFunction::Power { m: 1.0 }).unwrap();
        let mean_abs = xs.iter().map(|x| x.abs()).sum::<f64>() / xs.len() as f64;
        prop_assert!((one / mean_abs - 1.0).abs() < 1e-9);
        let n = estimate_orlicz_norm(&xs, &phi).unwrap();
        prop_assert!(one <= n * (1.0 + 1e-9), "{one} > {n}");
    }

    #[test]
    fn power_is_multiplicative(m in 1.0f64..8.0, x in 0.0f64..100.0, y in 0.0f64..100.0) {
        let phi = OrliczFunction::Power { m };
        let lhs = phi.value(x * y);
        let rhs = phi.value(x) * phi.value(y);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn lrv_shift_invariant(xs in prop::collection::vec(-10.0f64..10.0, 50..400), shift in -1e3f64..1e3) {
        let ys: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        for m in [LrvMethod::default(), LrvMethod::BatchMeans { batch_len: None }] {
            let a = estimate_lrv(&xs, m).unwrap().value;
            let b = estimate_lrv(&ys, m).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-7 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn envelopes_not_vacuous(a in 0.2f64..0.9, beta in 0.2f64..2.0, share in 0.2f64..1.0) {
        let g = (-beta).exp();
        let c = share * a * (1.0 - g) / g;
        let env = calibrate_rate(RateFamily::Geometric, a, beta, c, 1.0).unwrap();
        prop_assert!(env.max_ratio <= 1e3, "geometric ratio {}", env.max_ratio);
        for r in [2usize, 10, 100, 1000, 10_000] {
            prop_assert!(env.value(r) >= tau_bound(&CoefficientSequence::geometric(c, g).unwrap(), 1.0, r).unwrap().value * (1.0 - 1e-12));
        }
    }

    #[test]
    fn polynomial_envelopes_not_vacuous(beta in 1.5f64..4.0, share in 0.2f64..1.0) {
        let a = 0.6;
        let zeta: f64 = (1..200_000).map(|j| (j as f64).powf(-beta)).sum::<f64>() + 200_000f64.powf(1.0 - beta) / (beta - 1.0);
        let c = share * a / zeta * 0.999;
        let env = calibrate_rate(RateFamily::Polynomial, a, beta, c, 1.0).unwrap();
        prop_assert!(env.max_ratio <= 1e3, "polynomial ratio {}", env.max_ratio);
    }

    #[test]
    fn dp_verdict_monotone_in_exponent(lo in 1.5f64..4.0, gap in 0.1f64..2.0) {
        let phi = OrliczFunction::Power { m: 4.0 };
        let opts = DpOptions::default();
        let check = |beta: f64| check_condition_dp(&phi, 2.0, &CoefficientSequence::polynomial(0.1, beta).unwrap(), &opts).unwrap().verdict;
        let (v_lo, v_hi) = (check(lo), check(lo + gap));
        prop_assert!(!(v_lo == Verdict::Converges && v_hi == Verdict::Diverges));
    }
}
