//! Innovation samplers from the fixed catalogue
//! `normal | uniform | bernoulli | poisson | constant`.

use alloc::format;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{normal_cdf, SQRT_2PI};
use crate::orlicz::{Orlicz, OrliczFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sampler {
    Normal { mean: f64, sd: f64 },
    Uniform { low: f64, high: f64 },
    Bernoulli { p: f64 },
    Poisson { lambda: f64 },
    Constant { value: f64 },
}

impl Sampler {
    pub fn standard_normal() -> Self {
        Sampler::Normal { mean: 0.0, sd: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Sampler::Normal { mean, sd } => mean.is_finite() && sd >= 0.0 && sd.is_finite(),
            Sampler::Uniform { low, high } => low.is_finite() && high.is_finite() && low <= high,
            Sampler::Bernoulli { p } => (0.0..=1.0).contains(&p),
            Sampler::Poisson { lambda } => (0.0..=1e6).contains(&lambda),
            Sampler::Constant { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid sampler parameters {self:?}")))
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Sampler::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            Sampler::Uniform { low, high } => low + (high - low) * rng.random::<f64>(),
            Sampler::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            Sampler::Poisson { lambda } => {
                if lambda == 0.0 {
                    0.0
                } else {
                    Poisson::new(lambda).expect("validated lambda").sample(rng)
                }
            }
            Sampler::Constant { value } => value,
        }
    }

    /// Draws are nonnegative integers.
    pub fn is_count(&self) -> bool {
        match *self {
            Sampler::Bernoulli { .. } | Sampler::Poisson { .. } => true,
            Sampler::Constant { value } => value >= 0.0 && value.fract() == 0.0,
            _ => false,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Sampler::Normal { mean, .. } => mean,
            Sampler::Uniform { low, high } => 0.5 * (low + high),
            Sampler::Bernoulli { p } => p,
            Sampler::Poisson { lambda } => lambda,
            Sampler::Constant { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Sampler::Normal { sd, .. } => sd * sd,
            Sampler::Uniform { low, high } => (high - low).powi(2) / 12.0,
            Sampler::Bernoulli { p } => p * (1.0 - p),
            Sampler::Poisson { lambda } => lambda,
            Sampler::Constant { .. } => 0.0,
        }
    }

    /// `E|X|^m` in closed form where one is available.
    pub fn abs_moment(&self, m: f64) -> Option<f64> {
        if !(m > 0.0) {
            return None;
        }
        match *self {
            Sampler::Normal { mean, sd } => {
                if sd == 0.0 {
                    return Some(mean.abs().powf(m));
                }
                if mean == 0.0 {
                    return Some(sd.powf(m) * 2f64.powf(m / 2.0) * libm::tgamma((m + 1.0) / 2.0) / core::f64::consts::PI.sqrt());
                }
                if m == 1.0 {
                    let r = mean / sd;
                    return Some(sd * (2.0 / core::f64::consts::PI).sqrt() * (-0.5 * r * r).exp() + mean * (1.0 - 2.0 * normal_cdf(-r)));
                }
                if m.fract() == 0.0 && (m as u64).is_multiple_of(2) && m <= 32.0 {
                    // Even integer: E (mu + sd Z)^m by the binomial expansion.
                    let n = m as u64;
                    let mut total = 0.0;
                    let mut binom = 1.0;
                    let mut z_moment = 1.0; // E Z^k for even k: (k-1)!!
                    for k in 0..=n {
                        if k > 0 {
                            binom *= (n - k + 1) as f64 / k as f64;
                        }
                        if k % 2 == 0 {
                            if k >= 2 {
                                z_moment *= (k - 1) as f64;
                            }
                            total += binom * mean.powi((n - k) as i32) * sd.powi(k as i32) * z_moment;
                        }
                    }
                    return Some(total);
                }
                None
            }
            Sampler::Uniform { low, high } => {
                if high == low {
                    return Some(low.abs().powf(m));
                }
                let prim = |x: f64| x.abs().powf(m + 1.0) / (m + 1.0);
                let integral = if low >= 0.0 {
                    prim(high) - prim(low)
                } else if high <= 0.0 {
                    prim(low) - prim(high)
                } else {
                    prim(low) + prim(high)
                };
                Some(integral / (high - low))
            }
            Sampler::Bernoulli { p } => Some(p),
            Sampler::Poisson { lambda } => {
                if lambda == 0.0 {
                    return Some(0.0);
                }
                if lambda > 500.0 {
                    return None;
                }
                let mut pmf = (-lambda).exp();
                let mut total = 0.0;
                let k_max = (lambda + 40.0 * lambda.sqrt() + 60.0) as u64;
                for k in 1..=k_max {
                    pmf *= lambda / k as f64;
                    total += (k as f64).powf(m) * pmf;
                }
                Some(total)
            }
            Sampler::Constant { value } => Some(value.abs().powf(m)),
        }
    }

    /// `||X||_Phi` in closed form where one is available.
    pub fn orlicz_norm(&self, phi: &OrliczFunction) -> Option<f64> {
        match *phi {
            OrliczFunction::Power { m } => self.abs_moment(m).map(|v| v.powf(1.0 / m)),
            OrliczFunction::PowerLog { .. } => match *self {
                Sampler::Constant { value } => Some(value.abs() / phi.inverse(1.0)),
                Sampler::Normal { mean, sd } if sd == 0.0 => Some(mean.abs() / phi.inverse(1.0)),
                Sampler::Bernoulli { p } if p == 0.0 => Some(0.0),
                Sampler::Bernoulli { p } => Some(1.0 / phi.inverse(1.0 / p)),
                _ => None,
            },
        }
    }

    /// `sup_x f(x)` of the Lebesgue density, for absolutely continuous samplers.
    pub fn density_sup(&self) -> Option<f64> {
        match *self {
            Sampler::Normal { sd, .. } if sd > 0.0 => Some(1.0 / (sd * SQRT_2PI)),
            Sampler::Uniform { low, high } if high > low => Some(1.0 / (high - low)),
            _ => None,
        }
    }
}
