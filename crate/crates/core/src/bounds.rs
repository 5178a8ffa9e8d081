//! Closed-form bounds: the tau(r) bound and its finite-memory and rate
//! forms, the recursive-approximation error, p-Markov gaps, and numeric
//! checks of the (Dp) series conditions.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::numeric::ols_slope;
use crate::orlicz::{ln_phi_tilde_q_bound, phi_tilde_q_with, OrliczFunction};

/// `2 mu_1/(1-a) * min_p (a^{r/p} + A(p)/(1-a))` and its minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauBound {
    pub r: usize,
    pub value: f64,
    pub argmin_p: usize,
}

fn contraction(coeffs: &CoefficientSequence) -> Result<f64> {
    coeffs.validate()?;
    let a = coeffs.sum();
    if !(a < 1.0) {
        return Err(Error::precondition(format!("bound needs a = sum a_j < 1, got {a}")));
    }
    Ok(a)
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} must be a nonnegative real")))
    }
}

/// `[A(0), ..., A(p_max)]` summed from the far end so small tails keep full
/// relative precision.
pub fn tail_table(coeffs: &CoefficientSequence, p_max: usize) -> Vec<f64> {
    match coeffs {
        CoefficientSequence::Polynomial { .. } => {
            let mut t = alloc::vec![0.0; p_max + 1];
            t[p_max] = coeffs.tail(p_max);
            for p in (0..p_max).rev() {
                t[p] = t[p + 1] + coeffs.coefficient(p + 1);
            }
            t
        }
        _ => coeffs.tails_up_to(p_max),
    }
}

/// `min_{1 <= p <= r} (a^{r/p} + A(p)/(1-a))` with `tails[p] = A(p)`.
///
/// `a^{r/p}` grows with `p` while the tail term is nonnegative, so the scan
/// stops once `a^{r/p}` alone reaches the best value.
fn inf_term(a: f64, tails: &[f64], r: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, 1);
    for p in 1..=r {
        let geo = a.powf(r as f64 / p as f64);
        if geo >= best.0 {
            break;
        }
        let v = geo + tails[p] / (1.0 - a);
        if v < best.0 {
            best = (v, p);
        }
    }
    best
}

/// The tau(r) bound for a stationary chain with coefficients `coeffs`.
pub fn tau_bound(coeffs: &CoefficientSequence, mu_1: f64, r: usize) -> Result<TauBound> {
    let a = contraction(coeffs)?;
    check_scale("mu_1", mu_1)?;
    if r == 0 {
        return Err(Error::domain("lag r must be at least 1"));
    }
    let tails = tail_table(coeffs, r);
    let (inf, p) = inf_term(a, &tails, r);
    Ok(TauBound { r, value: 2.0 * mu_1 / (1.0 - a) * inf, argmin_p: p })
}

/// [`tau_bound`] for each `r` in `rs`, sharing one tail table.
pub fn tau_bounds(coeffs: &CoefficientSequence, mu_1: f64, rs: &[usize]) -> Result<Vec<TauBound>> {
    let a = contraction(coeffs)?;
    check_scale("mu_1", mu_1)?;
    if rs.contains(&0) {
        return Err(Error::domain("lag r must be at least 1"));
    }
    let r_max = rs.iter().copied().max().unwrap_or(1);
    let tails = tail_table(coeffs, r_max);
    Ok(rs
        .iter()
        .map(|&r| {
            let (inf, p) = inf_term(a, &tails, r);
            TauBound { r, value: 2.0 * mu_1 / (1.0 - a) * inf, argmin_p: p }
        })
        .collect())
}

/// Finite memory: `2 mu_1 (1-a)^{-1} a^{r/p}` for `r >= p`.
pub fn tau_bound_finite(p: usize, a: f64, mu_1: f64, r: usize) -> Result<f64> {
    if p == 0 {
        return Err(Error::domain("order p must be at least 1"));
    }
    if r < p {
        return Err(Error::precondition(format!("finite-memory bound needs r >= p, got r = {r}, p = {p}")));
    }
    if !(0.0..1.0).contains(&a) {
        return Err(Error::precondition(format!("bound needs 0 <= a < 1, got {a}")));
    }
    check_scale("mu_1", mu_1)?;
    Ok(2.0 * mu_1 / (1.0 - a) * a.powf(r as f64 / p as f64))
}

/// Recursive-approximation error
/// `(||X_0||_Phi + c_bar)/(1-a) * min_p (a^{r/p} + A(p)/(1-a))`.
pub fn approx_error_bound(coeffs: &CoefficientSequence, x0_norm: f64, c_bar: f64, r: usize) -> Result<TauBound> {
    let a = contraction(coeffs)?;
    check_scale("||X_0||_Phi", x0_norm)?;
    check_scale("c_bar", c_bar)?;
    if r == 0 {
        return Err(Error::domain("r must be at least 1"));
    }
    let tails = tail_table(coeffs, r);
    let (inf, p) = inf_term(a, &tails, r);
    Ok(TauBound { r, value: (x0_norm + c_bar) / (1.0 - a) * inf, argmin_p: p })
}

/// `mu_Phi / (1-a)`, the bound on `||X_0||_Phi` and on every truncation.
pub fn moment_bound(coeffs: &CoefficientSequence, mu_phi: f64) -> Result<f64> {
    let a = contraction(coeffs)?;
    check_scale("mu_Phi", mu_phi)?;
    Ok(mu_phi / (1.0 - a))
}

/// `a_{p+1} mu_Phi / (1-a)^2`, the gap between the p- and (p+1)-Markov
/// truncations.
pub fn p_markov_gap_bound(coeffs: &CoefficientSequence, mu_phi: f64, p: usize) -> Result<f64> {
    let a = contraction(coeffs)?;
    check_scale("mu_Phi", mu_phi)?;
    Ok(coeffs.coefficient(p + 1) * mu_phi / ((1.0 - a) * (1.0 - a)))
}

// ---------------------------------------------------------------------------
// Rate envelopes

/// Decay families with a rate envelope for tau(r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RateFamily {
    /// `a_j <= c e^{-beta j}`: envelope `e^{-sqrt(-ln(a) beta r)}`.
    Geometric,
    /// `a_j <= c j^{-beta}`: envelope `(ln r / r)^{beta - 1}`.
    Polynomial,
}

/// Envelope `C * shape(r)` calibrated against the exact bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEnvelope {
    pub family: RateFamily,
    pub a: f64,
    pub beta: f64,
    pub c: f64,
    pub mu_1: f64,
    /// Smallest `C` with `C shape(r) >= tau_bound(r)` on the calibration range.
    pub constant: f64,
    /// `max_r C shape(r) / tau_bound(r)` on the same range.
    pub max_ratio: f64,
    pub r_min: usize,
    pub r_max: usize,
}

pub const CALIBRATION_RANGE: (usize, usize) = (2, 10_000);

impl RateEnvelope {
    pub fn shape(&self, r: usize) -> f64 {
        rate_shape(self.family, self.a, self.beta, r)
    }

    pub fn value(&self, r: usize) -> f64 {
        self.constant * self.shape(r)
    }

    /// The standard choice of `p` for this family.
    pub fn p_choice(&self, r: usize) -> usize {
        match self.family {
            RateFamily::Geometric => geometric_p_choice(self.a, self.beta, r),
            RateFamily::Polynomial => polynomial_p_choice(self.a, self.beta, r),
        }
    }
}

fn rate_shape(family: RateFamily, a: f64, beta: f64, r: usize) -> f64 {
    let r = r as f64;
    match family {
        RateFamily::Geometric => (-(-a.ln() * beta * r).sqrt()).exp(),
        RateFamily::Polynomial => (r.ln() / r).powf(beta - 1.0),
    }
}

/// `p = floor(sqrt(-ln(a) r / beta))`, at least 1.
pub fn geometric_p_choice(a: f64, beta: f64, r: usize) -> usize {
    ((-a.ln() * r as f64 / beta).sqrt().floor() as usize).max(1)
}

/// Largest `p` with `p ln p (1 - beta) / ln a <= r`, at least 1.
pub fn polynomial_p_choice(a: f64, beta: f64, r: usize) -> usize {
    let k = (1.0 - beta) / a.ln();
    let f = |p: usize| p as f64 * (p as f64).ln() * k;
    let mut hi = 2usize;
    while f(hi) <= r as f64 {
        hi *= 2;
    }
    let mut lo = 1usize;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) <= r as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn rate_coefficients(family: RateFamily, a: f64, beta: f64, c: f64) -> Result<CoefficientSequence> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("rate envelopes need 0 < a < 1, got {a}")));
    }
    let coeffs = match family {
        RateFamily::Geometric => {
            if !(beta > 0.0) {
                return Err(Error::domain(format!("geometric rate needs beta > 0, got {beta}")));
            }
            CoefficientSequence::geometric(c, (-beta).exp())?
        }
        RateFamily::Polynomial => {
            if !(beta > 1.0) {
                return Err(Error::domain(format!("polynomial rate needs beta > 1, got {beta}")));
            }
            CoefficientSequence::polynomial(c, beta)?
        }
    };
    if coeffs.sum() > a * (1.0 + 1e-12) {
        return Err(Error::domain(format!("coefficients sum to {} > a = {a}", coeffs.sum())));
    }
    Ok(coeffs)
}

/// Calibrates `C` so that `C shape(r)` dominates
/// `2 mu_1/(1-a) min_p (a^{r/p} + A(p)/(1-a))` on `r in [2, 10^4]`, where
/// `A` comes from `a_j = c e^{-beta j}` or `c j^{-beta}` and `a` is any
/// contraction constant at least `sum a_j`.
pub fn calibrate_rate(family: RateFamily, a: f64, beta: f64, c: f64, mu_1: f64) -> Result<RateEnvelope> {
    check_scale("mu_1", mu_1)?;
    let coeffs = rate_coefficients(family, a, beta, c)?;
    let (r_min, r_max) = CALIBRATION_RANGE;
    let tails = tail_table(&coeffs, r_max);
    let exact: Vec<f64> = (r_min..=r_max).map(|r| 2.0 * mu_1 / (1.0 - a) * inf_term(a, &tails, r).0).collect();
    let shapes: Vec<f64> = (r_min..=r_max).map(|r| rate_shape(family, a, beta, r)).collect();
    let constant = exact.iter().zip(&shapes).map(|(e, s)| e / s).fold(0.0, f64::max);
    let max_ratio = exact.iter().zip(&shapes).map(|(e, s)| if *e == 0.0 { 1.0 } else { constant * s / e }).fold(1.0, f64::max);
    Ok(RateEnvelope { family, a, beta, c, mu_1, constant, max_ratio, r_min, r_max })
}

/// Geometric envelope `C e^{-sqrt(-ln(a) beta r)}` with `mu_1 = 1`.
pub fn tau_rate_geometric(a: f64, beta: f64, c: f64, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(Error::domain("rate envelopes need r >= 2"));
    }
    Ok(calibrate_rate(RateFamily::Geometric, a, beta, c, 1.0)?.value(r))
}

/// Polynomial envelope `C (ln r / r)^{beta - 1}` with `mu_1 = 1`.
pub fn tau_rate_polynomial(a: f64, beta: f64, c: f64, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(Error::domain("rate envelopes need r >= 2"));
    }
    Ok(calibrate_rate(RateFamily::Polynomial, a, beta, c, 1.0)?.value(r))
}

// ---------------------------------------------------------------------------
// (Dp) series conditions

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Which series was summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesCondition {
    /// `sum a_k Phi~_q(c0 k)`, finite support.
    Dp1,
    /// `sum a_k Phi~_q(-c0 k ln(sum_{j>=k} a_j))`.
    Dp2,
    /// `sum a_k Phi~_q(c0 k ln k)`.
    Dp1Prime,
    /// `sum a_k Phi~_q(c0 k^{1+b})`.
    Dp1DoublePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpOptions {
    pub c0: f64,
    pub terms: usize,
    /// Also require `k * term_k` not to decrease over the last decade before
    /// declaring divergence.
    pub growth_test: bool,
    /// Repeat over `c0 in {1e-3, 10^{-2.5}, ..., 1e3}`; the series condition
    /// holds if some `c0` converges.
    pub scan_c0: bool,
    /// Slope margin: converges if the fitted slope is below `-1 - margin`.
    pub margin: f64,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { c0: 1.0, terms: 10_000, growth_test: false, scan_c0: false, margin: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub k: usize,
    pub ln_term: f64,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub c0: f64,
    pub slope: f64,
    pub partial_sum: f64,
    pub verdict: Verdict,
}

/// Heuristic convergence report. The verdict fits `ln term_k` against
/// `ln k` over the last decade `k in [terms/10, terms]`: slope below
/// `-1 - margin` converges, slope at least `-1` diverges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpReport {
    pub condition: SeriesCondition,
    pub q: f64,
    pub c0: f64,
    pub terms: usize,
    pub partial_sum: f64,
    /// `None` when the series has finitely many nonzero terms.
    pub slope: Option<f64>,
    pub verdict: Verdict,
    /// Some terms used the numeric `Phi~_q` instead of the closed-form bound.
    pub numeric_fallback: bool,
    /// Log-spaced sample of the series.
    pub series: Vec<SeriesPoint>,
    pub scan: Vec<ScanPoint>,
}

/// `ln Phi~_q(x)` from the closed-form bound where it applies, else numeric.
fn ln_phi_tilde(phi: &OrliczFunction, q: f64, ln_x: f64, fallback: &mut bool) -> Result<f64> {
    match ln_phi_tilde_q_bound(phi, q, ln_x) {
        Ok(v) => Ok(v),
        Err(Error::Precondition(_)) => {
            *fallback = true;
            let x = ln_x.exp();
            Ok(phi_tilde_q_with(phi, q, x)?.ln())
        }
        Err(e) => Err(e),
    }
}

fn log_add(acc: f64, ln_term: f64) -> f64 {
    acc + ln_term.exp()
}

struct Series {
    ln_terms: Vec<f64>,
    fallback: bool,
}

/// `ln (a_k Phi~_q(arg_k))` for `k = 1..=terms`; `ln_arg(k)` returns
/// `ln arg_k`, `ln_a(k)` returns `ln a_k`.
fn series(phi: &OrliczFunction, q: f64, terms: usize, ln_a: impl Fn(usize) -> f64, ln_arg: impl Fn(usize) -> f64) -> Result<Series> {
    let mut fallback = false;
    let mut ln_terms = Vec::with_capacity(terms);
    for k in 1..=terms {
        let la = ln_a(k);
        let lt = if la == f64::NEG_INFINITY { f64::NEG_INFINITY } else { la + ln_phi_tilde(phi, q, ln_arg(k), &mut fallback)? };
        ln_terms.push(if lt.is_nan() { f64::NEG_INFINITY } else { lt });
    }
    Ok(Series { ln_terms, fallback })
}

fn judge(ln_terms: &[f64], opts: &DpOptions) -> (f64, Verdict) {
    let n = ln_terms.len();
    let start = (n / 10).max(1);
    if ln_terms[start - 1..].contains(&f64::INFINITY) {
        return (f64::INFINITY, Verdict::Diverges);
    }
    let finite: Vec<(f64, f64)> = (start..=n).filter(|&k| ln_terms[k - 1].is_finite()).map(|k| ((k as f64).ln(), ln_terms[k - 1])).collect();
    if finite.len() < 2 {
        // Terms vanish (or underflow entirely) over the last decade.
        return (f64::NEG_INFINITY, Verdict::Converges);
    }
    let (x, y): (Vec<f64>, Vec<f64>) = finite.into_iter().unzip();
    let slope = ols_slope(&x, &y);
    let verdict = if slope < -1.0 - opts.margin {
        Verdict::Converges
    } else if slope >= -1.0 {
        if opts.growth_test {
            // k term_k at the end of the decade at least its value at the start.
            let first = x[0] + y[0];
            let last = x[x.len() - 1] + y[y.len() - 1];
            if last >= first {
                Verdict::Diverges
            } else {
                Verdict::Inconclusive
            }
        } else {
            Verdict::Diverges
        }
    } else {
        Verdict::Inconclusive
    };
    (slope, verdict)
}

fn sample_points(ln_terms: &[f64]) -> Vec<SeriesPoint> {
    let n = ln_terms.len();
    let mut out = Vec::new();
    let mut partial = 0.0;
    let mut next = 1usize;
    for (i, lt) in ln_terms.iter().enumerate() {
        let k = i + 1;
        if lt.is_finite() {
            partial = log_add(partial, *lt);
        } else if *lt == f64::INFINITY {
            partial = f64::INFINITY;
        }
        if k == next || k == n {
            out.push(SeriesPoint { k, ln_term: *lt, partial_sum: partial });
            next = ((next as f64 * 1.2).ceil() as usize).max(next + 1);
        }
    }
    out
}

fn validate_dp(phi: &OrliczFunction, q: f64, opts: &DpOptions) -> Result<()> {
    phi.validate()?;
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::domain(format!("q = {q} must be > 1")));
    }
    if !(opts.c0 > 0.0) || !opts.c0.is_finite() {
        return Err(Error::domain(format!("c0 = {} must be positive", opts.c0)));
    }
    if opts.terms < 20 {
        return Err(Error::domain(format!("need at least 20 terms, got {}", opts.terms)));
    }
    Ok(())
}

fn c0_grid() -> Vec<f64> {
    (0..=12).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect()
}

fn run_condition<F>(condition: SeriesCondition, q: f64, opts: &DpOptions, eval: F) -> Result<DpReport>
where
    F: Fn(f64) -> Result<Series>,
{
    let main = eval(opts.c0)?;
    let (slope, verdict) = judge(&main.ln_terms, opts);
    let series = sample_points(&main.ln_terms);
    let partial_sum = series.last().map_or(0.0, |p| p.partial_sum);
    let mut report = DpReport {
        condition,
        q,
        c0: opts.c0,
        terms: opts.terms,
        partial_sum,
        slope: Some(slope),
        verdict,
        numeric_fallback: main.fallback,
        series,
        scan: Vec::new(),
    };
    if opts.scan_c0 {
        for c0 in c0_grid() {
            let s = eval(c0)?;
            let (slope, verdict) = judge(&s.ln_terms, opts);
            let partial_sum = sample_points(&s.ln_terms).last().map_or(0.0, |p| p.partial_sum);
            report.numeric_fallback |= s.fallback;
            report.scan.push(ScanPoint { c0, slope, partial_sum, verdict });
        }
        if let Some(best) = report.scan.iter().find(|s| s.verdict == Verdict::Converges) {
            report.verdict = Verdict::Converges;
            report.c0 = best.c0;
            report.slope = Some(best.slope);
            report.partial_sum = best.partial_sum;
        } else if report.scan.iter().all(|s| s.verdict == Verdict::Diverges) && report.verdict == Verdict::Diverges {
            report.verdict = Verdict::Diverges;
        } else {
            report.verdict = Verdict::Inconclusive;
        }
    }
    Ok(report)
}

/// Checks (Dp1) for finitely supported coefficients and (Dp2) otherwise.
/// Once `sum_{j>=k} a_j = 0` the remaining terms use the (Dp1) argument.
pub fn check_condition_dp(phi: &OrliczFunction, q: f64, coeffs: &CoefficientSequence, opts: &DpOptions) -> Result<DpReport> {
    validate_dp(phi, q, opts)?;
    coeffs.validate()?;
    if let Some(order) = coeffs.order() {
        let mut fallback = false;
        let mut ln_terms = Vec::with_capacity(order);
        for k in 1..=order {
            let la = coeffs.ln_coefficient(k);
            let lt = if la == f64::NEG_INFINITY { la } else { la + ln_phi_tilde(phi, q, (opts.c0 * k as f64).ln(), &mut fallback)? };
            ln_terms.push(lt);
        }
        let series = sample_points(&ln_terms);
        let partial_sum = series.last().map_or(0.0, |p| p.partial_sum);
        let verdict = if partial_sum.is_finite() { Verdict::Converges } else { Verdict::Diverges };
        return Ok(DpReport {
            condition: SeriesCondition::Dp1,
            q,
            c0: opts.c0,
            terms: order,
            partial_sum,
            slope: None,
            verdict,
            numeric_fallback: fallback,
            series,
            scan: Vec::new(),
        });
    }
    // Tails A(k-1) = sum_{j>=k} a_j in log space.
    let ln_tails: Vec<f64> = match coeffs {
        CoefficientSequence::Polynomial { .. } => tail_table(coeffs, opts.terms).iter().map(|t| t.ln()).collect(),
        _ => (0..=opts.terms).map(|p| coeffs.ln_tail(p)).collect(),
    };
    run_condition(SeriesCondition::Dp2, q, opts, |c0| {
        series(
            phi,
            q,
            opts.terms,
            |k| coeffs.ln_coefficient(k),
            |k| {
                let lt = ln_tails[k - 1];
                if lt == f64::NEG_INFINITY {
                    (c0 * k as f64).ln()
                } else {
                    (c0 * k as f64).ln() + (-lt).ln()
                }
            },
        )
    })
}

/// Decay families for the specialized conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decay", rename_all = "snake_case", deny_unknown_fields)]
pub enum Decay {
    /// `a_k = c k^{-a}` with argument `c0 k ln k`.
    PolynomialLogK { c: f64, a: f64 },
    /// `a_k = c exp(-a k^b)` with argument `c0 k^{1+b}`.
    StretchedExponential { c: f64, a: f64, b: f64 },
}

/// Checks (Dp1') or (Dp1'') for the matching decay family.
pub fn check_condition_specialized(phi: &OrliczFunction, q: f64, decay: Decay, opts: &DpOptions) -> Result<DpReport> {
    validate_dp(phi, q, opts)?;
    match decay {
        Decay::PolynomialLogK { c, a } => {
            if !(c > 0.0 && a > 0.0) {
                return Err(Error::domain(format!("invalid decay {decay:?}")));
            }
            run_condition(SeriesCondition::Dp1Prime, q, opts, |c0| {
                series(phi, q, opts.terms, |k| c.ln() - a * (k as f64).ln(), |k| (c0 * k as f64 * (k as f64).ln()).ln())
            })
        }
        Decay::StretchedExponential { c, a, b } => {
            if !(c > 0.0 && a > 0.0 && b >= 0.0) {
                return Err(Error::domain(format!("invalid decay {decay:?}")));
            }
            run_condition(SeriesCondition::Dp1DoublePrime, q, opts, |c0| {
                series(phi, q, opts.terms, |k| c.ln() - a * (k as f64).powf(b), |k| c0.ln() + (1.0 + b) * (k as f64).ln())
            })
        }
    }
}
