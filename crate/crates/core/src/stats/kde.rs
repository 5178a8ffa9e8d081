//! Gaussian kernel density estimates and their supremum.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{golden_max, quantile_sorted, variance, SQRT_2PI};

/// Kernel mass beyond this many bandwidths is ignored (below 1e-14).
const CUTOFF: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum Bandwidth {
    /// `0.9 min(sd, IQR/1.34) n^{-1/5}` per coordinate; `n^{-1/6}` with `sd`
    /// in two dimensions.
    #[default]
    Silverman,
    Fixed { h: f64 },
}

fn silverman_1d(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let sd = variance(sorted).sqrt();
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * n.powf(-0.2)
}

/// A one-dimensional Gaussian KDE over sorted data.
pub struct Kde1 {
    data: Vec<f64>,
    h: f64,
}

impl Kde1 {
    pub fn new(samples: &[f64], bandwidth: Bandwidth) -> Result<Self> {
        if samples.len() < 2 || samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("KDE needs at least two finite samples"));
        }
        let mut data = samples.to_vec();
        data.sort_by(f64::total_cmp);
        let h = match bandwidth {
            Bandwidth::Silverman => silverman_1d(&data),
            Bandwidth::Fixed { h } => h,
        };
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::domain("bandwidth must be positive (degenerate sample?)"));
        }
        Ok(Kde1 { data, h })
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn density(&self, x: f64) -> f64 {
        let lo = self.data.partition_point(|v| *v < x - CUTOFF * self.h);
        let hi = self.data.partition_point(|v| *v <= x + CUTOFF * self.h);
        let s: f64 = self.data[lo..hi].iter().map(|v| (-0.5 * ((x - v) / self.h).powi(2)).exp()).sum();
        s / (self.data.len() as f64 * self.h * SQRT_2PI)
    }

    /// `(argmax, max)` of the estimate: a 1024-point grid over the data
    /// range, refined by golden-section search around the best cell.
    pub fn sup(&self) -> (f64, f64) {
        const GRID: usize = 1024;
        let (a, b) = (self.data[0], self.data[self.data.len() - 1]);
        let step = (b - a) / (GRID - 1) as f64;
        if step == 0.0 {
            return (a, self.density(a));
        }
        let mut best = (a, f64::NEG_INFINITY);
        for i in 0..GRID {
            let x = a + step * i as f64;
            let v = self.density(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        let (x, v) = golden_max(best.0 - step, best.0 + step, 1e-10, |x| self.density(x));
        if v > best.1 {
            (x, v)
        } else {
            best
        }
    }
}

/// A two-dimensional product-Gaussian KDE.
pub struct Kde2 {
    /// Points sorted by first coordinate.
    points: Vec<(f64, f64)>,
    h: (f64, f64),
}

impl Kde2 {
    pub fn new(points: &[(f64, f64)], bandwidth: Bandwidth) -> Result<Self> {
        if points.len() < 2 || points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::domain("KDE needs at least two finite points"));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        let h = match bandwidth {
            Bandwidth::Silverman => {
                let n = pts.len() as f64;
                let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
                let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
                let f = n.powf(-1.0 / 6.0);
                (variance(&xs).sqrt() * f, variance(&ys).sqrt() * f)
            }
            Bandwidth::Fixed { h } => (h, h),
        };
        if !(h.0 > 0.0 && h.1 > 0.0) {
            return Err(Error::domain("bandwidth must be positive (degenerate sample?)"));
        }
        Ok(Kde2 { points: pts, h })
    }

    pub fn bandwidth(&self) -> (f64, f64) {
        self.h
    }

    pub fn density(&self, x: f64, y: f64) -> f64 {
        let (hx, hy) = self.h;
        let lo = self.points.partition_point(|p| p.0 < x - CUTOFF * hx);
        let hi = self.points.partition_point(|p| p.0 <= x + CUTOFF * hx);
        let s: f64 = self.points[lo..hi]
            .iter()
            .filter(|p| (p.1 - y).abs() <= CUTOFF * hy)
            .map(|p| (-0.5 * (((x - p.0) / hx).powi(2) + ((y - p.1) / hy).powi(2))).exp())
            .sum();
        s / (self.points.len() as f64 * hx * hy * 2.0 * core::f64::consts::PI)
    }

    /// `((x, y), max)`: a 96 x 96 grid over the central 99.8% of each
    /// coordinate, then shrinking local grids around the best point.
    pub fn sup(&self) -> ((f64, f64), f64) {
        const GRID: usize = 96;
        let mut xs: Vec<f64> = self.points.iter().map(|p| p.0).collect();
        let mut ys: Vec<f64> = self.points.iter().map(|p| p.1).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let (x0, x1) = (quantile_sorted(&xs, 0.001), quantile_sorted(&xs, 0.999));
        let (y0, y1) = (quantile_sorted(&ys, 0.001), quantile_sorted(&ys, 0.999));
        let (mut sx, mut sy) = ((x1 - x0) / (GRID - 1) as f64, (y1 - y0) / (GRID - 1) as f64);
        let mut best = ((x0, y0), f64::NEG_INFINITY);
        for i in 0..GRID {
            for j in 0..GRID {
                let (x, y) = (x0 + sx * i as f64, y0 + sy * j as f64);
                let v = self.density(x, y);
                if v > best.1 {
                    best = ((x, y), v);
                }
            }
        }
        for _ in 0..30 {
            let ((cx, cy), _) = best;
            for i in -2i32..=2 {
                for j in -2i32..=2 {
                    let (x, y) = (cx + sx * 0.5 * i as f64, cy + sy * 0.5 * j as f64);
                    let v = self.density(x, y);
                    if v > best.1 {
                        best = ((x, y), v);
                    }
                }
            }
            sx *= 0.5;
            sy *= 0.5;
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::Sampler;
    use rand::SeedableRng;

    #[test]
    fn normal_sup() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..50_000).map(|_| Sampler::standard_normal().sample(&mut rng)).collect();
        let (arg, sup) = Kde1::new(&xs, Bandwidth::Silverman).unwrap().sup();
        assert!(arg.abs() < 0.2);
        assert!((sup - 1.0 / SQRT_2PI).abs() < 0.02, "{sup}");
    }

    #[test]
    fn bivariate_normal_sup() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let s = Sampler::standard_normal();
        let pts: Vec<(f64, f64)> = (0..50_000).map(|_| (s.sample(&mut rng), s.sample(&mut rng))).collect();
        let (_, sup) = Kde2::new(&pts, Bandwidth::Silverman).unwrap().sup();
        let truth = 1.0 / (2.0 * core::f64::consts::PI);
        assert!((sup / truth - 1.0).abs() < 0.1, "{sup}");
    }

    #[test]
    fn scaling_divides_density() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..5000).map(|_| Sampler::standard_normal().sample(&mut rng)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x).collect();
        let a = Kde1::new(&xs, Bandwidth::Silverman).unwrap().sup().1;
        let b = Kde1::new(&ys, Bandwidth::Silverman).unwrap().sup().1;
        assert!((a / b - 3.0).abs() < 1e-6);
    }
}
