//! Lipschitz coefficient sequences `(a_j)_{j >= 1}` and their tails
//! `A(p) = sum_{j > p} a_j`.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of polynomial terms summed explicitly before the integral remainder.
const POLY_EXPLICIT_TERMS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSequence {
    /// `a_j = values[j - 1]` for `j <= values.len()`, zero afterwards.
    Finite { values: Vec<f64> },
    /// `a_j = c * gamma^j`.
    Geometric { c: f64, gamma: f64 },
    /// `a_j = c * j^{-beta}`.
    Polynomial { c: f64, beta: f64 },
}

impl CoefficientSequence {
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        let s = CoefficientSequence::Finite { values };
        s.validate()?;
        Ok(s)
    }

    pub fn geometric(c: f64, gamma: f64) -> Result<Self> {
        let s = CoefficientSequence::Geometric { c, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn polynomial(c: f64, beta: f64) -> Result<Self> {
        let s = CoefficientSequence::Polynomial { c, beta };
        s.validate()?;
        Ok(s)
    }

    /// Checks the parameter domains (not the contraction `a < 1`).
    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientSequence::Finite { values } => {
                if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
                    return Err(Error::domain(format!("coefficient {v} is not a nonnegative real")));
                }
            }
            &CoefficientSequence::Geometric { c, gamma } => {
                if !(c > 0.0 && c.is_finite()) || !(gamma > 0.0 && gamma < 1.0) {
                    return Err(Error::domain(format!("geometric coefficients need c > 0, gamma in (0,1); got c = {c}, gamma = {gamma}")));
                }
            }
            &CoefficientSequence::Polynomial { c, beta } => {
                if !(c > 0.0 && c.is_finite()) || !(beta > 1.0 && beta.is_finite()) {
                    return Err(Error::domain(format!("polynomial coefficients need c > 0, beta > 1; got c = {c}, beta = {beta}")));
                }
            }
        }
        Ok(())
    }

    /// Errors unless `a = sum a_j < 1`.
    pub fn check_contraction(&self) -> Result<f64> {
        let a = self.sum();
        if !(a < 1.0) {
            return Err(Error::contraction("a = sum a_j", a));
        }
        Ok(a)
    }

    /// `a_j`; zero for `j = 0`.
    pub fn coefficient(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match self {
            CoefficientSequence::Finite { values } => values.get(j - 1).copied().unwrap_or(0.0),
            &CoefficientSequence::Geometric { c, gamma } => c * gamma.powf(j as f64),
            &CoefficientSequence::Polynomial { c, beta } => c * (j as f64).powf(-beta),
        }
    }

    /// `ln a_j`, exact even where `a_j` underflows.
    pub fn ln_coefficient(&self, j: usize) -> f64 {
        match *self {
            CoefficientSequence::Geometric { c, gamma } if j > 0 => c.ln() + j as f64 * gamma.ln(),
            CoefficientSequence::Polynomial { c, beta } if j > 0 => c.ln() - beta * (j as f64).ln(),
            _ => self.coefficient(j).ln(),
        }
    }

    /// `a = sum_j a_j = A(0)`.
    pub fn sum(&self) -> f64 {
        self.tail(0)
    }

    /// `A(p) = sum_{j > p} a_j`. Polynomial tails are the upper end of
    /// [`tail_bracket`](Self::tail_bracket).
    pub fn tail(&self, p: usize) -> f64 {
        match self {
            CoefficientSequence::Finite { values } => values.iter().skip(p).sum(),
            &CoefficientSequence::Geometric { c, gamma } => c * gamma.powf(p as f64 + 1.0) / (1.0 - gamma),
            CoefficientSequence::Polynomial { .. } => self.tail_bracket(p).1,
        }
    }

    /// `ln A(p)`.
    pub fn ln_tail(&self, p: usize) -> f64 {
        match self {
            &CoefficientSequence::Geometric { c, gamma } => c.ln() + (p as f64 + 1.0) * gamma.ln() - (1.0 - gamma).ln(),
            _ => self.tail(p).ln(),
        }
    }

    /// Lower and upper bounds on `A(p)`. Exact (equal ends) except for the
    /// polynomial family, which sums 256 terms explicitly and brackets the
    /// remainder `sum_{j > N} j^{-beta}` between `(N+1)^{1-beta}/(beta-1)` and
    /// `N^{1-beta}/(beta-1)`.
    pub fn tail_bracket(&self, p: usize) -> (f64, f64) {
        match self {
            &CoefficientSequence::Polynomial { c, beta } => {
                let n = p + POLY_EXPLICIT_TERMS;
                let explicit: f64 = (p + 1..=n).map(|j| (j as f64).powf(-beta)).sum();
                let lower = (n as f64 + 1.0).powf(1.0 - beta) / (beta - 1.0);
                let upper = (n as f64).powf(1.0 - beta) / (beta - 1.0);
                (c * (explicit + lower), c * (explicit + upper))
            }
            _ => {
                let t = self.tail(p);
                (t, t)
            }
        }
    }

    /// `[A(0), A(1), ..., A(p_max)]`.
    pub fn tails_up_to(&self, p_max: usize) -> Vec<f64> {
        (0..=p_max).map(|p| self.tail(p)).collect()
    }

    /// Index of the last nonzero coefficient for finite sequences.
    pub fn order(&self) -> Option<usize> {
        match self {
            CoefficientSequence::Finite { values } => Some(values.iter().rposition(|v| *v > 0.0).map_or(0, |i| i + 1)),
            _ => None,
        }
    }

    pub fn has_finite_support(&self) -> bool {
        self.order().is_some()
    }

    /// `(factor * a_j)_j`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0) || !factor.is_finite() {
            return Err(Error::domain(format!("scale factor {factor} must be a nonnegative real")));
        }
        Ok(match self {
            CoefficientSequence::Finite { values } => CoefficientSequence::Finite { values: values.iter().map(|v| v * factor).collect() },
            _ if factor == 0.0 => CoefficientSequence::Finite { values: Vec::new() },
            &CoefficientSequence::Geometric { c, gamma } => CoefficientSequence::Geometric { c: c * factor, gamma },
            &CoefficientSequence::Polynomial { c, beta } => CoefficientSequence::Polynomial { c: c * factor, beta },
        })
    }
}
