//! Long-run variance `sigma^2 = sum_{i in Z} Cov(X_0, X_i)` from one path.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{mean, variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Taper {
    /// `w_i = 1 - i/(L+1)`.
    #[default]
    Bartlett,
    /// `w_i = 1`.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum LrvMethod {
    /// `gamma_0 + 2 sum_{i=1}^L w_i gamma_i`, default `L = ceil(n^{1/3})`.
    TruncatedAutocovariance { lag: Option<usize>, taper: Taper },
    /// `b` times the variance of the means of consecutive batches of length
    /// `b`, default `b = ceil(sqrt(n))`.
    BatchMeans { batch_len: Option<usize> },
}

impl Default for LrvMethod {
    fn default() -> Self {
        LrvMethod::TruncatedAutocovariance { lag: None, taper: Taper::Bartlett }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrvEstimate {
    pub value: f64,
    pub method: LrvMethod,
    /// Lag `L` or batch length actually used.
    pub window: usize,
    /// The estimate is not positive; it is reported unclamped.
    pub nonpositive: bool,
}

/// `gamma_i = (1/n) sum_{t} (x_t - xbar)(x_{t+i} - xbar)`.
pub fn autocovariance(xs: &[f64], lag: usize) -> f64 {
    let n = xs.len();
    if lag >= n {
        return 0.0;
    }
    let m = mean(xs);
    let s: f64 = xs.iter().zip(&xs[lag..]).map(|(a, b)| (a - m) * (b - m)).sum();
    s / n as f64
}

pub fn estimate_lrv(xs: &[f64], method: LrvMethod) -> Result<LrvEstimate> {
    let n = xs.len();
    if n < 4 {
        return Err(Error::domain("need at least 4 observations"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite observation"));
    }
    let (value, window) = match method {
        LrvMethod::TruncatedAutocovariance { lag, taper } => {
            let l = lag.unwrap_or_else(|| (n as f64).cbrt().ceil() as usize).min(n - 1);
            let mut v = autocovariance(xs, 0);
            for i in 1..=l {
                let w = match taper {
                    Taper::Bartlett => 1.0 - i as f64 / (l as f64 + 1.0),
                    Taper::Flat => 1.0,
                };
                v += 2.0 * w * autocovariance(xs, i);
            }
            (v, l)
        }
        LrvMethod::BatchMeans { batch_len } => {
            let b = batch_len.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize).max(1);
            let batches = n / b;
            if batches < 2 {
                return Err(Error::domain("batch length leaves fewer than two batches"));
            }
            let means: Vec<f64> = xs.chunks_exact(b).map(mean).collect();
            (b as f64 * variance(&means), b)
        }
    };
    Ok(LrvEstimate { value, method, window, nonpositive: !(value > 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Sampler;
    use rand::SeedableRng;

    fn ar1(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = Sampler::standard_normal();
        let mut x = 0.0;
        (0..n + 100).map(|_| { x = 0.5 * x + s.sample(&mut rng); x }).skip(100).collect()
    }

    #[test]
    fn iid_unit_variance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..100_000).map(|_| Sampler::standard_normal().sample(&mut rng)).collect();
        let v = estimate_lrv(&xs, LrvMethod::default()).unwrap().value;
        assert!((v - 1.0).abs() < 0.05, "{v}");
        // About 316 batches: relative standard error sqrt(2/316) ~ 0.08.
        let b = estimate_lrv(&xs, LrvMethod::BatchMeans { batch_len: None }).unwrap().value;
        assert!((b - 1.0).abs() < 0.25, "{b}");
    }

    #[test]
    fn ar1_long_run_variance() {
        // One run of 1e5: Bartlett sd ~ 0.1, batch means sd ~ 0.3 (315
        // batches), so batch means is checked on the average of ten runs.
        let (mut sa, mut sb) = (0.0, 0.0);
        for seed in 0..10 {
            let xs = ar1(100_000, seed);
            let a = estimate_lrv(&xs, LrvMethod::default()).unwrap().value;
            assert!((a - 4.0).abs() < 0.4, "{a}");
            sa += a / 10.0;
            sb += estimate_lrv(&xs, LrvMethod::BatchMeans { batch_len: None }).unwrap().value / 10.0;
        }
        assert!((sb - 4.0).abs() < 0.4, "{sb}");
        assert!((sa / sb - 1.0).abs() < 0.15);
    }

    #[test]
    fn shift_invariance() {
        let xs = ar1(5000, 4);
        let ys: Vec<f64> = xs.iter().map(|x| x + 123.0).collect();
        for m in [LrvMethod::default(), LrvMethod::BatchMeans { batch_len: Some(50) }] {
            let a = estimate_lrv(&xs, m).unwrap().value;
            let b = estimate_lrv(&ys, m).unwrap().value;
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0));
        }
    }

    #[test]
    fn constant_path_is_flagged() {
        let e = estimate_lrv(&[1.0; 100], LrvMethod::default()).unwrap();
        assert!(e.nonpositive);
        assert_eq!(e.value, 0.0);
    }
}
