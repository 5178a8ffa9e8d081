//! Orlicz functions, empirical Orlicz norms and the transform
//! `Phi~_q(x) = sup_{y>0} { (x y)^{q-1} - Phi(y)/y }`.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect_decreasing, golden_max};

/// A convex increasing function on `[0, inf)` with `Phi(0) = 0`.
///
/// Catalogued families are described by [`OrliczFunction`]; any other
/// evaluator can be plugged in through [`CustomOrlicz`]. Only catalogued
/// families get closed-form bounds.
pub trait Orlicz: Sync {
    /// `Phi(x)` for `x >= 0`; no domain check.
    fn value(&self, x: f64) -> f64;

    /// `ln Phi(e^{ln_x})`, used where `Phi` itself would overflow.
    fn ln_value(&self, ln_x: f64) -> f64 {
        self.value(ln_x.exp()).ln()
    }

    /// `lim_{y -> 0+} Phi(y) / y`.
    fn slope_at_zero(&self) -> f64 {
        let y = 1e-12;
        self.value(y) / y
    }

    /// Inverse `Phi^{-1}(v)` for `v >= 0`.
    fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.value(hi) < v {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let mut lo = hi;
        while self.value(lo) > v && lo > f64::MIN_POSITIVE {
            lo *= 0.5;
        }
        bisect_decreasing(lo, hi, 1e-14, |x| v - self.value(x))
    }
}

/// The catalogued families `x^m` and `x^m (1 + ln(1 + x))^{m'}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrliczFunction {
    Power { m: f64 },
    PowerLog { m: f64, m_log: f64 },
}

impl OrliczFunction {
    pub fn power(m: f64) -> Result<Self> {
        let phi = OrliczFunction::Power { m };
        phi.validate()?;
        Ok(phi)
    }

    pub fn power_log(m: f64, m_log: f64) -> Result<Self> {
        let phi = OrliczFunction::PowerLog { m, m_log };
        phi.validate()?;
        Ok(phi)
    }

    /// `Phi(x) = x^q (1 + ln(1 + x))^{(1+b)(q-1)}`.
    pub fn power_log_for(q: f64, b: f64) -> Result<Self> {
        Self::power_log(q, (1.0 + b) * (q - 1.0))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OrliczFunction::Power { m } if m >= 1.0 && m.is_finite() => Ok(()),
            OrliczFunction::PowerLog { m, m_log } if m >= 1.0 && m.is_finite() && m_log >= 0.0 && m_log.is_finite() => Ok(()),
            other => Err(Error::domain(format!("invalid Orlicz function {other:?}: need m >= 1, m' >= 0"))),
        }
    }

    /// Leading power `m`.
    pub fn m(&self) -> f64 {
        match *self {
            OrliczFunction::Power { m } | OrliczFunction::PowerLog { m, .. } => m,
        }
    }

    /// Checked evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("Orlicz function evaluated at {x} < 0")));
        }
        Ok(self.value(x))
    }
}

fn ln1p_exp(t: f64) -> f64 {
    if t > 36.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

impl Orlicz for OrliczFunction {
    fn value(&self, x: f64) -> f64 {
        match *self {
            OrliczFunction::Power { m } => x.powf(m),
            OrliczFunction::PowerLog { m, m_log } => x.powf(m) * (1.0 + x.ln_1p()).powf(m_log),
        }
    }

    fn ln_value(&self, ln_x: f64) -> f64 {
        match *self {
            OrliczFunction::Power { m } => m * ln_x,
            OrliczFunction::PowerLog { m, m_log } => m * ln_x + m_log * ln1p_exp(ln_x).ln_1p(),
        }
    }

    fn slope_at_zero(&self) -> f64 {
        if self.m() > 1.0 {
            0.0
        } else {
            1.0
        }
    }

    fn inverse(&self, v: f64) -> f64 {
        match *self {
            OrliczFunction::Power { m } => v.max(0.0).powf(1.0 / m),
            OrliczFunction::PowerLog { .. } => {
                if v <= 0.0 {
                    return 0.0;
                }
                // Phi(x) >= x^m, so the root is below v^{1/m} once Phi(1) >= 1.
                let mut hi = v.powf(1.0 / self.m()).max(1.0);
                while self.value(hi) < v {
                    hi *= 2.0;
                }
                let mut lo = hi;
                while self.value(lo) > v && lo > f64::MIN_POSITIVE {
                    lo *= 0.5;
                }
                bisect_decreasing(lo, hi, 1e-14, |x| v - self.value(x))
            }
        }
    }
}

/// User-supplied Orlicz function. Only numeric operations apply to it.
pub struct CustomOrlicz<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> Orlicz for CustomOrlicz<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// Outcome of [`check_submultiplicative`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmultiplicativeReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub violations: Vec<(f64, f64)>,
}

/// Checks `Phi(xy) <= Phi(x) Phi(y)` (relative tolerance `1e-12`) on `grid x grid`.
pub fn check_submultiplicative(phi: &dyn Orlicz, grid: &[f64]) -> Result<SubmultiplicativeReport> {
    if grid.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    if let Some(bad) = grid.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::domain(format!("grid entry {bad} is not a positive real")));
    }
    let mut violations = Vec::new();
    for &x in grid {
        for &y in grid {
            let lhs = phi.value(x * y);
            let rhs = phi.value(x) * phi.value(y);
            if lhs > rhs * (1.0 + 1e-12) {
                violations.push((x, y));
            }
        }
    }
    Ok(SubmultiplicativeReport { holds: violations.is_empty(), pairs_checked: grid.len() * grid.len(), violations })
}

/// Arguments of `Phi~_q(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiTildeQuery {
    pub phi: OrliczFunction,
    pub q: f64,
    pub x: f64,
}

impl PhiTildeQuery {
    pub fn new(phi: OrliczFunction, q: f64, x: f64) -> Result<Self> {
        phi.validate()?;
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain(format!("q = {q} must be > 1")));
        }
        if !(x >= 0.0) {
            return Err(Error::domain(format!("x = {x} must be >= 0")));
        }
        Ok(PhiTildeQuery { phi, q, x })
    }
}

const GRID_POINTS: usize = 4096;
const LN_Y_MIN: f64 = -18.420_680_743_952_367; // ln 1e-8
const LN_Y_MAX: f64 = 18.420_680_743_952_367; // ln 1e8
const LN_OVERFLOW: f64 = 700.0;

/// `(x y)^{q-1} - Phi(y)/y` evaluated at `y = e^{ln_y}` in log space.
fn tilde_objective(phi: &dyn Orlicz, q: f64, ln_x: f64, ln_y: f64) -> f64 {
    let gain = (q - 1.0) * (ln_x + ln_y);
    let cost = phi.ln_value(ln_y) - ln_y;
    if gain > LN_OVERFLOW || cost > LN_OVERFLOW {
        return if gain > cost { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    gain.exp() - cost.exp()
}

/// Numeric `Phi~_q(x)` for a catalogued family.
pub fn phi_tilde_q(query: &PhiTildeQuery) -> Result<f64> {
    phi_tilde_q_with(&query.phi, query.q, query.x)
}

/// Numeric `Phi~_q(x)` for any Orlicz function.
///
/// Scans 4096 log-spaced points of `y` over `[1e-8, 1e8]`, shifting the window
/// while the maximum sits on its edge, then refines the bracketing cell by
/// golden-section search. On multimodal objectives the result is only a
/// lower bound on the supremum.
pub fn phi_tilde_q_with(phi: &dyn Orlicz, q: f64, x: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::domain(format!("q = {q} must be > 1")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("x = {x} must be >= 0")));
    }
    // Value approached as y -> 0.
    let at_zero = -phi.slope_at_zero();
    let at_zero = if at_zero == 0.0 { 0.0 } else { at_zero };
    if x == 0.0 {
        return Ok(at_zero);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let ln_x = x.ln();
    let width = LN_Y_MAX - LN_Y_MIN;
    let step = width / (GRID_POINTS - 1) as f64;
    let mut lo = LN_Y_MIN;
    let mut shifted_down = false;
    let mut shifted_up = false;
    loop {
        let mut best = (0usize, f64::NEG_INFINITY);
        for i in 0..GRID_POINTS {
            let v = tilde_objective(phi, q, ln_x, lo + step * i as f64);
            if v.is_nan() {
                return Err(Error::Numeric {
                    message: format!("Phi~_q objective is NaN at y = {}", (lo + step * i as f64).exp()),
                    best: best.1.is_finite().then_some(best.1),
                });
            }
            if v == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
            if v > best.1 {
                best = (i, v);
            }
        }
        let (i, grid_best) = best;
        if i == GRID_POINTS - 1 && !shifted_down {
            if lo + width >= LN_OVERFLOW {
                // Still increasing where Phi(y)/y and (xy)^{q-1} leave f64 range.
                return Ok(f64::INFINITY);
            }
            lo += width - step;
            shifted_up = true;
            continue;
        }
        if i == 0 && !shifted_up {
            if lo <= -LN_OVERFLOW {
                return Ok(grid_best.max(at_zero));
            }
            lo -= width - step;
            shifted_down = true;
            continue;
        }
        let a = lo + step * i.saturating_sub(1) as f64;
        let b = lo + step * (i + 1).min(GRID_POINTS - 1) as f64;
        let (_, refined) = golden_max(a, b, 1e-13, |t| tilde_objective(phi, q, ln_x, t));
        if refined.is_nan() {
            return Err(Error::Numeric { message: "golden-section refinement produced NaN".into(), best: Some(grid_best) });
        }
        return Ok(refined.max(grid_best).max(at_zero));
    }
}

/// Closed-form upper bounds on `Phi~_q(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiTildeBound {
    /// `(x L^{-1}(x^{q-1}))^{q-1}` where `Phi(x) = x^q L(x)`.
    pub lemma: f64,
    /// The simplified envelope: `x^{(m-1)(q-1)/(m-q)}` for `x^m`, or
    /// `exp((q-1) x^{1/(1+b)}) x^{q-1}` for `x^q (1+ln(1+x))^{(1+b)(q-1)}`.
    pub closed_form: Option<f64>,
}

/// Generalized inverse `inf{y > 0 : L(y) >= z}` of the slowly varying part
/// `L(y) = Phi(y) / y^q`.
fn slowly_varying_inverse(phi: &OrliczFunction, q: f64, z: f64) -> Result<f64> {
    match *phi {
        OrliczFunction::Power { m } => {
            if m <= q {
                return Err(Error::precondition(format!("bound needs Power(m) with m > q, got m = {m}, q = {q}")));
            }
            Ok(z.powf(1.0 / (m - q)))
        }
        OrliczFunction::PowerLog { m, m_log } => {
            if (m - q).abs() > 1e-12 {
                return Err(Error::precondition(format!("bound needs PowerLog with m = q, got m = {m}, q = {q}")));
            }
            // L(y) = (1 + ln(1 + y))^{m'} >= 1 with L(0) = 1.
            if z <= 1.0 {
                return Ok(0.0);
            }
            if m_log == 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok((z.powf(1.0 / m_log) - 1.0).exp_m1())
        }
    }
}

/// Upper bound on `Phi~_q(x)` via the generalized inverse of `L`.
pub fn phi_tilde_q_bound(query: &PhiTildeQuery) -> Result<PhiTildeBound> {
    let PhiTildeQuery { phi, q, x } = *query;
    let inv = slowly_varying_inverse(&phi, q, x.powf(q - 1.0))?;
    let lemma = if x == 0.0 { 0.0 } else { (x * inv).powf(q - 1.0) };
    let closed_form = match phi {
        OrliczFunction::Power { m } => Some(x.powf((m - 1.0) * (q - 1.0) / (m - q))),
        OrliczFunction::PowerLog { m_log, .. } => {
            let b = m_log / (q - 1.0) - 1.0;
            (b >= 0.0).then(|| ((q - 1.0) * x.powf(1.0 / (1.0 + b))).exp() * x.powf(q - 1.0))
        }
    };
    Ok(PhiTildeBound { lemma, closed_form })
}

/// `ln` of [`PhiTildeBound::lemma`] at `x = e^{ln_x}`, computed without
/// forming `x` so that very large arguments stay finite.
pub fn ln_phi_tilde_q_bound(phi: &OrliczFunction, q: f64, ln_x: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::domain(format!("q = {q} must be > 1")));
    }
    if ln_x == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    match *phi {
        OrliczFunction::Power { m } => {
            if m <= q {
                return Err(Error::precondition(format!("bound needs Power(m) with m > q, got m = {m}, q = {q}")));
            }
            Ok((m - 1.0) * (q - 1.0) / (m - q) * ln_x)
        }
        OrliczFunction::PowerLog { m, m_log } => {
            if (m - q).abs() > 1e-12 {
                return Err(Error::precondition(format!("bound needs PowerLog with m = q, got m = {m}, q = {q}")));
            }
            if m_log == 0.0 {
                return Ok(if ln_x > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY });
            }
            // L^{-1}(x^{q-1}) = expm1(u) with u = x^{(q-1)/m'} - 1.
            let u = ((q - 1.0) / m_log * ln_x).exp_m1();
            if u <= 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            let ln_inv = if u > 30.0 { u + (-(-u).exp()).ln_1p() } else { u.exp_m1().ln() };
            Ok((q - 1.0) * (ln_x + ln_inv))
        }
    }
}

/// Empirical Orlicz norm: the `u > 0` solving `(1/n) sum Phi(|x_i| / u) = 1`.
///
/// Bisection (relative tolerance `1e-10`) between
/// `max|x| / Phi^{-1}(n)` and `max|x| / Phi^{-1}(1/n)`.
pub fn estimate_orlicz_norm(samples: &[f64], phi: &dyn Orlicz) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite sample"));
    }
    let n = samples.len() as f64;
    let max = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return Ok(0.0);
    }
    let lo = max / phi.inverse(n);
    let hi = max / phi.inverse(1.0 / n);
    if !(hi > lo) {
        return Ok(lo);
    }
    let excess = |u: f64| samples.iter().map(|x| phi.value(x.abs() / u)).sum::<f64>() / n - 1.0;
    Ok(bisect_decreasing(lo, hi, 1e-10, excess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(m: f64) -> OrliczFunction {
        OrliczFunction::power(m).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(2.0).eval(0.0).unwrap(), 0.0);
        assert_eq!(p(3.0).eval(2.0).unwrap(), 8.0);
        assert_eq!(OrliczFunction::power_log(2.0, 1.0).unwrap().eval(0.0).unwrap(), 0.0);
        assert!(matches!(p(2.0).eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_families_rejected() {
        assert!(OrliczFunction::power(0.5).is_err());
        assert!(OrliczFunction::power_log(2.0, -1.0).is_err());
    }

    #[test]
    fn submultiplicative_examples() {
        let grid = [0.5, 1.0, 2.0, 10.0];
        assert!(check_submultiplicative(&p(2.0), &grid).unwrap().holds);
        let pl = OrliczFunction::power_log(2.0, 1.0).unwrap();
        assert!(check_submultiplicative(&pl, &grid).unwrap().holds);
        assert!(check_submultiplicative(&p(2.0), &[0.0, 1.0]).is_err());
        assert!(check_submultiplicative(&p(2.0), &[]).is_err());
    }

    #[test]
    fn non_submultiplicative_custom_is_flagged() {
        // e^x - 1 is convex but grows too fast: Phi(9) > Phi(3)^2.
        let phi = CustomOrlicz(|x: f64| x.exp_m1());
        let r = check_submultiplicative(&phi, &[2.0, 3.0]).unwrap();
        assert!(!r.holds);
        assert!(r.violations.contains(&(3.0, 3.0)));
    }

    #[test]
    fn phi_tilde_examples() {
        let v = phi_tilde_q(&PhiTildeQuery::new(p(3.0), 2.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(v, 0.25, max_relative = 1e-9);
        for phi in [p(2.0), p(4.0), OrliczFunction::power_log(2.0, 1.0).unwrap()] {
            assert_eq!(phi_tilde_q(&PhiTildeQuery::new(phi, 2.0, 0.0).unwrap()).unwrap(), 0.0);
        }
        let v = phi_tilde_q(&PhiTildeQuery::new(p(4.0), 2.0, 2.0).unwrap()).unwrap();
        assert!(v <= 2f64.powf(1.5));
        // y (2 - y^2) peaks at y = sqrt(2/3)
        assert_relative_eq!(v, (2.0f64 / 3.0).sqrt() * 4.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn phi_tilde_unbounded_when_m_below_q() {
        let v = phi_tilde_q(&PhiTildeQuery::new(p(1.5), 2.0, 1.0).unwrap()).unwrap();
        assert_eq!(v, f64::INFINITY);
    }

    #[test]
    fn phi_tilde_power_log_large_argument_shifts_window() {
        // Maximizer sits near y ~ e^{sqrt(x) - 1}, far beyond 1e8 for x = 1000.
        let phi = OrliczFunction::power_log_for(2.0, 1.0).unwrap();
        let q = PhiTildeQuery::new(phi, 2.0, 1000.0).unwrap();
        let v = phi_tilde_q(&q).unwrap();
        let b = phi_tilde_q_bound(&q).unwrap();
        assert!(v.is_finite() && v > 1e13);
        assert!(v <= b.lemma * (1.0 + 1e-9));
    }

    #[test]
    fn bound_examples() {
        let b = phi_tilde_q_bound(&PhiTildeQuery::new(p(3.0), 2.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(b.lemma, 1.0);
        assert_relative_eq!(b.closed_form.unwrap(), 1.0);
        let b = phi_tilde_q_bound(&PhiTildeQuery::new(p(4.0), 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(b.lemma, 0.0);
        assert_eq!(b.closed_form.unwrap(), 0.0);
        let pl = OrliczFunction::power_log_for(2.0, 0.0).unwrap();
        let b = phi_tilde_q_bound(&PhiTildeQuery::new(pl, 2.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(b.closed_form.unwrap(), core::f64::consts::E, max_relative = 1e-12);
        assert!(b.lemma <= b.closed_form.unwrap());
    }

    #[test]
    fn bound_preconditions() {
        let q = PhiTildeQuery::new(p(2.0), 2.0, 1.0).unwrap();
        assert!(matches!(phi_tilde_q_bound(&q), Err(Error::Precondition(_))));
        let q = PhiTildeQuery::new(OrliczFunction::power_log(3.0, 1.0).unwrap(), 2.0, 1.0).unwrap();
        assert!(matches!(phi_tilde_q_bound(&q), Err(Error::Precondition(_))));
        assert!(PhiTildeQuery::new(p(3.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn orlicz_norm_examples() {
        let c = [1.7; 10];
        assert_relative_eq!(estimate_orlicz_norm(&c, &p(2.0)).unwrap(), 1.7, max_relative = 1e-9);
        let xs = [0.3, -1.2, 2.5, 0.0, -0.7, 4.1];
        for m in [1.0, 2.0, 3.5] {
            let closed = (xs.iter().map(|x: &f64| x.abs().powf(m)).sum::<f64>() / xs.len() as f64).powf(1.0 / m);
            assert_relative_eq!(estimate_orlicz_norm(&xs, &p(m)).unwrap(), closed, max_relative = 1e-9);
        }
        assert_eq!(estimate_orlicz_norm(&[0.0, 0.0], &p(2.0)).unwrap(), 0.0);
        assert!(estimate_orlicz_norm(&[], &p(2.0)).is_err());
    }

    #[test]
    fn power_log_norm_solves_defining_equation() {
        let phi = OrliczFunction::power_log(2.0, 1.0).unwrap();
        let xs = [0.1, 0.4, 1.0, 2.0, 3.0];
        let u = estimate_orlicz_norm(&xs, &phi).unwrap();
        let lhs = xs.iter().map(|x| phi.value(x / u)).sum::<f64>() / xs.len() as f64;
        assert_relative_eq!(lhs, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn inverse_round_trips() {
        let phi = OrliczFunction::power_log(2.0, 1.5).unwrap();
        for v in [1e-6, 0.3, 1.0, 7.0, 1e5] {
            assert_relative_eq!(phi.value(phi.inverse(v)), v, max_relative = 1e-10);
        }
    }
}
