//! One-sample Kolmogorov-Smirnov test.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Terms kept in the Kolmogorov series.
const SERIES_TERMS: usize = 100;

/// `P(K > lambda)` for the Kolmogorov distribution.
///
/// Uses `2 sum_k (-1)^{k-1} e^{-2 k^2 lambda^2}` (100 terms); below
/// `lambda = 1` that series converges slowly, so the equivalent theta-function
/// form `1 - sqrt(2 pi)/lambda sum_k e^{-(2k-1)^2 pi^2 / (8 lambda^2)}` is used.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        let c = core::f64::consts::PI * core::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=SERIES_TERMS).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
        return (1.0 - (2.0 * core::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=SERIES_TERMS {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Exact `D_n = sup_x |F_n(x) - F(x)|` and its asymptotic p-value
/// `P(K > sqrt(n) D_n)`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("NaN sample"));
    }
    let mut v: Vec<f64> = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok((d, kolmogorov_survival(n.sqrt() * d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::normal_cdf;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn quantile_sample_distance() {
        let n = 50;
        let xs: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let (d, _) = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert_relative_eq!(d, 0.5 / n as f64, max_relative = 1e-12);
    }

    #[test]
    fn single_sample_at_median() {
        let (d, _) = ks_statistic(&[0.0], normal_cdf).unwrap();
        assert_relative_eq!(d, 0.5);
    }

    #[test]
    fn survival_known_values() {
        // Critical values of the Kolmogorov distribution.
        assert_relative_eq!(kolmogorov_survival(1.358_098_8), 0.05, max_relative = 1e-5);
        assert_relative_eq!(kolmogorov_survival(1.627_624), 0.01, max_relative = 1e-4);
        // Both series agree where they overlap.
        let lam: f64 = 0.99;
        let alt: f64 = 2.0 * (1..=100).map(|k| (if k % 2 == 1 { 1.0 } else { -1.0 }) * (-2.0 * (k * k) as f64 * lam * lam).exp()).sum::<f64>();
        assert_relative_eq!(kolmogorov_survival(lam), alt, max_relative = 1e-10);
        assert!(kolmogorov_survival(0.2) > 0.999_999);
    }

    #[test]
    fn uniform_null_p_values() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut inside = 0;
        for _ in 0..1000 {
            let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
            let (_, p) = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
            if p > 0.01 && p < 0.99 {
                inside += 1;
            }
        }
        assert!(inside >= 950, "{inside}");
    }
}
