//! One function per task kind. Each returns a flat table plus a JSON
//! report and a verdict.

use infmem_core::bounds::{
    approx_error_bound, check_condition_dp, moment_bound, tau_bounds, DpOptions, Verdict,
};
use infmem_core::dependence::{compare_to_bound, default_coupling_plan, estimate_tau};
use infmem_core::model::euclidean_diff;
use infmem_core::numeric::{mean, variance};
use infmem_core::orlicz::{estimate_orlicz_norm, phi_tilde_q, phi_tilde_q_bound, PhiTildeQuery};
use infmem_core::rng::{stream, Lane};
use infmem_core::simulate::{choose_truncation, recursive_approximation, run_truncated, simulate_replication, tail_sup, DEFAULT_STATE_CAP};
use infmem_core::stats::{
    clt_test, default_setup, density_bound_check, sip_lil_diagnostic, slln_diagnostic, LimitTheoremReport, Thresholds,
};
use infmem_core::{ChainModel, Error, OrliczFunction, Replicator, SimulationPlan};
use serde_json::{json, Value};

use crate::config::{PlanSpec, TaskSpec};
use crate::output::fmt_f64;
use crate::parallel::RayonReplicator;

/// Table, report and verdict of one task.
#[derive(Debug, Clone)]
pub struct TaskOutput {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pass: bool,
    pub report: Value,
}

impl TaskOutput {
    fn new(header: &[&str]) -> Self {
        TaskOutput { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), pass: true, report: Value::Null }
    }
}

/// Shared inputs for the tasks of one run.
pub struct TaskContext<'a> {
    pub model: &'a ChainModel,
    pub phi: OrliczFunction,
    pub plan: PlanSpec,
    pub thresholds: Thresholds,
    pub replicator: &'a RayonReplicator,
}

type Result<T> = std::result::Result<T, Error>;

const L1: OrliczFunction = OrliczFunction::Power { m: 1.0 };

pub fn phi_label(phi: &OrliczFunction) -> String {
    match *phi {
        OrliczFunction::Power { m } => format!("power:{}", fmt_f64(m)),
        OrliczFunction::PowerLog { m, m_log } => format!("power_log:{}:{}", fmt_f64(m), fmt_f64(m_log)),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn run_task(task: &TaskSpec, cx: &TaskContext) -> Result<TaskOutput> {
    match task {
        TaskSpec::Simulate => simulate(cx),
        TaskSpec::TauBound { r } => tau_bound_table(cx, r),
        TaskSpec::TauEstimate { r } => tau_estimate(cx, r),
        TaskSpec::CheckDp { q, c0, terms, growth_test, scan_c0, margin, coeffs, expect } => {
            let opts = DpOptions { c0: *c0, terms: *terms, growth_test: *growth_test, scan_c0: *scan_c0, margin: margin.unwrap_or(DpOptions::default().margin) };
            let coeffs = coeffs.as_ref().unwrap_or(cx.model.coeffs());
            let report = check_condition_dp(&cx.phi, *q, coeffs, &opts)?;
            let mut out = TaskOutput::new(&["k", "ln_term", "partial_sum"]);
            for p in &report.series {
                out.rows.push(vec![p.k.to_string(), fmt_f64(p.ln_term), fmt_f64(p.partial_sum)]);
            }
            out.pass = match expect {
                Some(v) => report.verdict == *v,
                None => report.verdict == Verdict::Converges,
            };
            out.report = json!({ "coeffs": coeffs, "expect": expect, "dp": report });
            Ok(out)
        }
        TaskSpec::Slln { q, n_grid } => limit(slln_diagnostic(cx.model, *q, n_grid, cx.plan.replications, cx.plan.seed, cx.replicator)?),
        TaskSpec::Clt { n, t_grid, sigma2 } => {
            limit(clt_test(cx.model, *n, cx.plan.replications, *sigma2, t_grid, cx.plan.seed, &cx.thresholds, cx.replicator)?)
        }
        TaskSpec::Sip { n, sigma2 } => limit(sip_lil_diagnostic(cx.model, *sigma2, *n, cx.plan.replications, cx.plan.seed, &cx.thresholds, cx.replicator)?),
        TaskSpec::Density { n_joint, samples, bandwidth } => {
            limit(cx.replicator.install(|| density_bound_check(cx.model, *n_joint, *samples, *bandwidth, cx.plan.seed, &cx.thresholds))?)
        }
        TaskSpec::ApproxError { r, tail } => approx_error(cx, r, tail),
        TaskSpec::PhiTilde { q, x, phis } => phi_tilde(cx, *q, x, phis),
        TaskSpec::OrliczNorm { phis, sets, size, sampler } => orlicz_norm(cx, phis, *sets, *size, sampler),
    }
}

/// The plan with `"auto"` counts replaced by the stationary default.
fn stationary_plan(cx: &TaskContext, horizon: usize) -> Result<SimulationPlan> {
    let (p, burn_in) = match (cx.plan.p.fixed(), cx.plan.burn_in.fixed()) {
        (Some(p), Some(b)) => (p, b),
        _ => {
            let s = default_setup(cx.model)?;
            (s.p, s.burn_in)
        }
    };
    SimulationPlan::new(p, burn_in, horizon, cx.plan.replications, cx.plan.seed)
}

fn simulate(cx: &TaskContext) -> Result<TaskOutput> {
    let plan = stationary_plan(cx, cx.plan.horizon)?;
    let d = cx.model.state_dim();
    let mut header = vec!["replication".to_string(), "t".to_string()];
    header.extend((0..d).map(|i| format!("x{i}")));
    let paths = cx.replicator.try_map(plan.replications, |rep| simulate_replication(cx.model, &plan, rep))?;
    let mut out = TaskOutput { header, rows: Vec::with_capacity(plan.horizon * plan.replications), pass: true, report: Value::Null };
    for path in &paths {
        for t in 1..=path.len() {
            let mut row = vec![path.replication.to_string(), t.to_string()];
            row.extend(path.state(t).iter().map(|v| fmt_f64(*v)));
            out.rows.push(row);
        }
    }
    let mut report = json!({ "plan": plan });
    if plan.short_burn_in() {
        report["warning"] = json!("p exceeds burn_in");
    }
    out.report = report;
    Ok(out)
}

fn tau_bound_table(cx: &TaskContext, r: &[usize]) -> Result<TaskOutput> {
    let mu = cx.model.mu_1();
    let bounds = tau_bounds(cx.model.coeffs(), mu.value, r)?;
    let mut out = TaskOutput::new(&["r", "bound", "argmin_p"]);
    for b in &bounds {
        out.rows.push(vec![b.r.to_string(), fmt_f64(b.value), b.argmin_p.to_string()]);
    }
    out.report = json!({ "a": cx.model.a(), "mu_1": mu });
    Ok(out)
}

fn tau_estimate(cx: &TaskContext, r: &[usize]) -> Result<TaskOutput> {
    let r_max = *r.iter().max().unwrap();
    let plan = match (cx.plan.p.fixed(), cx.plan.burn_in.fixed()) {
        (Some(p), Some(b)) => SimulationPlan::new(p, b, r_max, cx.plan.replications, cx.plan.seed)?,
        _ => default_coupling_plan(cx.model, r_max, cx.plan.replications, cx.plan.seed)?,
    };
    let est = estimate_tau(cx.model, r, &plan, cx.replicator)?;
    let cmp = compare_to_bound(&est, cx.model.coeffs(), cx.model.mu_1().value)?;
    let mut out = TaskOutput::new(&["r", "mean_abs_gap", "ci_halfwidth", "n_reps", "bound", "argmin_p", "ratio", "pass"]);
    for (e, row) in est.iter().zip(&cmp.rows) {
        out.rows.push(vec![
            e.r.to_string(),
            fmt_f64(e.mean_abs_gap),
            fmt_f64(e.ci_halfwidth),
            e.n_reps.to_string(),
            fmt_f64(row.bound),
            row.argmin_p.to_string(),
            fmt_f64(row.ratio),
            row.pass.to_string(),
        ]);
    }
    out.pass = cmp.pass;
    out.report = json!({ "plan": plan, "mu_1": cx.model.mu_1(), "log_slope": cmp.log_slope, "statistic": "coupling gap E|X_r - X*_r|" });
    Ok(out)
}

fn limit(report: LimitTheoremReport) -> Result<TaskOutput> {
    let mut out = TaskOutput::new(&["theorem", "statistic", "point", "value"]);
    let theorem = match report.theorem {
        infmem_core::stats::Theorem::Slln { .. } => "slln",
        infmem_core::stats::Theorem::Clt => "clt",
        infmem_core::stats::Theorem::Sip => "sip",
        infmem_core::stats::Theorem::Density { .. } => "density",
    };
    for r in &report.rows {
        out.rows.push(vec![theorem.to_string(), r.statistic.clone(), fmt_f64(r.point), fmt_f64(r.value)]);
    }
    out.pass = report.pass;
    out.report = to_json(&report);
    Ok(out)
}

fn approx_error(cx: &TaskContext, r: &[usize], tail: &[f64]) -> Result<TaskOutput> {
    let model = cx.model;
    let r_max = *r.iter().max().unwrap();
    let mu = model.mu_phi(&cx.phi)?;
    let x0_norm = moment_bound(model.coeffs(), mu.value)?;
    let c_bar = tail_sup(tail, model.state_dim());
    let bounds: Vec<_> = r.iter().map(|&ri| approx_error_bound(model.coeffs(), x0_norm, c_bar, ri)).collect::<Result<_>>()?;
    let plan = match (cx.plan.p.fixed(), cx.plan.burn_in.fixed()) {
        (Some(p), Some(b)) => SimulationPlan::new(p, b, r_max, cx.plan.replications, cx.plan.seed)?,
        _ => {
            let smallest = bounds.iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
            let (p, b) = if smallest > 0.0 {
                let t = choose_truncation(model, &L1, smallest / 100.0)?;
                (t.p, t.burn_in)
            } else {
                (model.coeffs().order().unwrap_or(1).max(1), 0)
            };
            SimulationPlan::new(p, b, r_max, cx.plan.replications, cx.plan.seed)?
        }
    };
    plan.validate(DEFAULT_STATE_CAP)?;
    let per_rep = cx.replicator.try_map(plan.replications, |rep| {
        let approx = recursive_approximation(model, tail, r_max, plan.seed, rep)?;
        let mut reference = Vec::with_capacity(r.len());
        run_truncated(model, &plan, rep, |t, x| {
            if r.contains(&t) {
                reference.push((t, x.to_vec()));
            }
        })?;
        Ok(r.iter()
            .map(|&ri| {
                let x = &reference.iter().find(|(t, _)| *t == ri).unwrap().1;
                euclidean_diff(approx.state(ri), x)
            })
            .collect::<Vec<f64>>())
    })?;
    let mut out = TaskOutput::new(&["r", "mean_abs_error", "ci_halfwidth", "bound", "argmin_p", "pass"]);
    for (i, b) in bounds.iter().enumerate() {
        let xs: Vec<f64> = per_rep.iter().map(|g| g[i]).collect();
        let m = mean(&xs);
        let ci = 1.96 * (variance(&xs) / xs.len() as f64).sqrt();
        let pass = m <= b.value;
        out.pass &= pass;
        out.rows.push(vec![b.r.to_string(), fmt_f64(m), fmt_f64(ci), fmt_f64(b.value), b.argmin_p.to_string(), pass.to_string()]);
    }
    out.report = json!({
        "reference_plan": plan,
        "x0_norm": x0_norm,
        "x0_norm_source": "moment bound mu_Phi/(1-a)",
        "mu_phi": mu,
        "c_bar": c_bar,
    });
    Ok(out)
}

fn phi_tilde(cx: &TaskContext, q: f64, xs: &[f64], phis: &[OrliczFunction]) -> Result<TaskOutput> {
    let points: Vec<(OrliczFunction, f64)> = phis.iter().flat_map(|phi| xs.iter().map(move |x| (*phi, *x))).collect();
    let rows = cx.replicator.try_map(points.len(), |i| {
        let (phi, x) = points[i as usize];
        let query = PhiTildeQuery::new(phi, q, x)?;
        let value = phi_tilde_q(&query)?;
        let bound = match phi_tilde_q_bound(&query) {
            Ok(b) => Some(b),
            Err(Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
        Ok((phi, x, value, bound))
    })?;
    let mut out = TaskOutput::new(&["phi", "q", "x", "phi_tilde", "lemma_bound", "closed_form", "pass"]);
    for (phi, x, value, bound) in rows {
        let pass = bound.is_none_or(|b| value <= b.lemma * (1.0 + 1e-9));
        out.pass &= pass;
        out.rows.push(vec![
            phi_label(&phi),
            fmt_f64(q),
            fmt_f64(x),
            fmt_f64(value),
            bound.map_or(String::new(), |b| fmt_f64(b.lemma)),
            bound.and_then(|b| b.closed_form).map_or(String::new(), fmt_f64),
            pass.to_string(),
        ]);
    }
    Ok(out)
}

fn orlicz_norm(cx: &TaskContext, phis: &[OrliczFunction], sets: usize, size: usize, sampler: &infmem_core::Sampler) -> Result<TaskOutput> {
    sampler.validate()?;
    let seed = cx.plan.seed;
    let per_set = cx.replicator.try_map(sets, |set| {
        let mut rng = stream(seed, set, Lane::Aux);
        let xs: Vec<f64> = (0..size).map(|_| sampler.sample(&mut rng)).collect();
        let one = estimate_orlicz_norm(&xs, &L1)?;
        let norms = phis.iter().map(|phi| estimate_orlicz_norm(&xs, phi)).collect::<Result<Vec<f64>>>()?;
        Ok((one, norms))
    })?;
    let mut out = TaskOutput::new(&["set", "phi", "norm_1", "norm_phi", "pass"]);
    for (set, (one, norms)) in per_set.iter().enumerate() {
        for (phi, n) in phis.iter().zip(norms) {
            let pass = *one <= n * (1.0 + 1e-9);
            out.pass &= pass;
            out.rows.push(vec![set.to_string(), phi_label(phi), fmt_f64(*one), fmt_f64(*n), pass.to_string()]);
        }
    }
    out.report = json!({ "sampler": sampler, "size": size });
    Ok(out)
}
