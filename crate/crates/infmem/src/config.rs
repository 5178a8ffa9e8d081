//! Experiment configuration files (JSON).
//!
//! Unknown keys are rejected everywhere. Optional keys are the ones marked
//! `Option`; everything else must be spelled out.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use infmem_core::bounds::Verdict;
use infmem_core::models::ModelSpec;
use infmem_core::stats::{Bandwidth, Thresholds};
use infmem_core::{ChainModel, CoefficientSequence, OrliczFunction, Sampler};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RunError};

/// Key marking a manifest; `run` accepts either file kind.
pub const MANIFEST_KEY: &str = "manifest_version";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Orlicz function for the model constants and the (Dp) checks.
    pub phi: OrliczFunction,
    pub plan: PlanSpec,
    pub tasks: Vec<TaskSpec>,
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdOverrides>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Auto {
    Auto,
}

/// A count that is either given or chosen from the error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Fixed(usize),
    Auto(Auto),
}

impl Count {
    pub fn fixed(self) -> Option<usize> {
        match self {
            Count::Fixed(n) => Some(n),
            Count::Auto(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    /// Truncation order; `"auto"` picks it from the truncation bound.
    pub p: Count,
    /// Burn-in; `"auto"` together with `p`.
    pub burn_in: Count,
    pub horizon: usize,
    pub replications: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdOverrides {
    pub ks_alpha: Option<f64>,
    pub lil_band: Option<(f64, f64)>,
    pub lil_quantile: Option<f64>,
    pub kde_slack: Option<f64>,
}

impl ThresholdOverrides {
    pub fn resolve(&self) -> Thresholds {
        let d = Thresholds::default();
        Thresholds {
            ks_alpha: self.ks_alpha.unwrap_or(d.ks_alpha),
            lil_band: self.lil_band.unwrap_or(d.lil_band),
            lil_quantile: self.lil_quantile.unwrap_or(d.lil_quantile),
            kde_slack: self.kde_slack.unwrap_or(d.kde_slack),
        }
    }

    fn full(t: Thresholds) -> Self {
        ThresholdOverrides { ks_alpha: Some(t.ks_alpha), lil_band: Some(t.lil_band), lil_quantile: Some(t.lil_quantile), kde_slack: Some(t.kde_slack) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    /// Truncated sample paths for every replication of the plan.
    Simulate,
    /// The tau(r) bound on an `r` grid.
    TauBound { r: Vec<usize> },
    /// Coupling gaps on an `r` grid, compared with the bound.
    TauEstimate { r: Vec<usize> },
    /// Condition (Dp) on the model's coefficients, or on `coeffs` when given.
    CheckDp {
        q: f64,
        c0: f64,
        terms: usize,
        growth_test: bool,
        scan_c0: bool,
        margin: Option<f64>,
        coeffs: Option<CoefficientSequence>,
        /// Passes iff the verdict equals this; otherwise iff it converges.
        expect: Option<Verdict>,
    },
    Slln { q: f64, n_grid: Vec<usize> },
    Clt { n: usize, t_grid: Vec<f64>, sigma2: Option<f64> },
    Sip { n: usize, sigma2: Option<f64> },
    Density { n_joint: usize, samples: usize, bandwidth: Bandwidth },
    /// Recursive approximation from the tail `c` against a fine truncated
    /// reference, compared with the approximation bound.
    ApproxError { r: Vec<usize>, tail: Vec<f64> },
    /// `Phi~_q` against its closed-form bound on an `x` grid.
    PhiTilde { q: f64, x: Vec<f64>, phis: Vec<OrliczFunction> },
    /// Empirical `||X||_1` against `||X||_Phi` on random sample sets.
    OrliczNorm { phis: Vec<OrliczFunction>, sets: usize, size: usize, sampler: Sampler },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Simulate => "simulate",
            TaskSpec::TauBound { .. } => "tau-bound",
            TaskSpec::TauEstimate { .. } => "tau-estimate",
            TaskSpec::CheckDp { .. } => "check-dp",
            TaskSpec::Slln { .. } => "slln",
            TaskSpec::Clt { .. } => "clt",
            TaskSpec::Sip { .. } => "sip",
            TaskSpec::Density { .. } => "density",
            TaskSpec::ApproxError { .. } => "approx-error",
            TaskSpec::PhiTilde { .. } => "phi-tilde",
            TaskSpec::OrliczNorm { .. } => "orlicz-norm",
        }
    }

    /// Structural checks that need no computation.
    fn check(&self) -> std::result::Result<(), String> {
        let nonempty_r = |r: &[usize]| {
            if r.is_empty() || r.contains(&0) {
                Err("r must be a nonempty list of positive lags".to_string())
            } else {
                Ok(())
            }
        };
        match self {
            TaskSpec::TauBound { r } | TaskSpec::TauEstimate { r } | TaskSpec::ApproxError { r, .. } => nonempty_r(r),
            TaskSpec::PhiTilde { x, phis, .. } if x.is_empty() || phis.is_empty() => Err("x and phis must be nonempty".into()),
            TaskSpec::OrliczNorm { phis, sets, size, .. } if phis.is_empty() || *sets == 0 || *size == 0 => {
                Err("phis, sets and size must be nonempty".into())
            }
            TaskSpec::Slln { n_grid, .. } if n_grid.is_empty() => Err("n_grid is empty".into()),
            TaskSpec::Clt { t_grid, .. } if t_grid.is_empty() => Err("t_grid is empty".into()),
            _ => Ok(()),
        }
    }
}

impl ExperimentConfig {
    /// Parses a config, or the resolved config inside a manifest.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| RunError::Config(format!("invalid JSON: {e}")))?;
        let value = match value.get(MANIFEST_KEY) {
            Some(_) => value.get("config").cloned().ok_or_else(|| RunError::Config("manifest has no 'config' entry".into()))?,
            None => value,
        };
        serde_json::from_value(value).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Config(m) => RunError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Applies command-line overrides and fills in default thresholds.
    pub fn resolved(mut self, seed: Option<u64>, output: Option<PathBuf>) -> Self {
        if let Some(s) = seed {
            self.plan.seed = s;
        }
        if let Some(o) = output {
            self.output = o;
        }
        let t = self.thresholds.unwrap_or_default().resolve();
        self.thresholds = Some(ThresholdOverrides::full(t));
        self
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds.unwrap_or_default().resolve()
    }

    /// Checks everything that can be checked before running: plan counts,
    /// thresholds, task parameters and the model (built once here).
    pub fn validate(&self) -> Result<ChainModel> {
        let p = &self.plan;
        if p.horizon == 0 || p.replications == 0 || p.p.fixed() == Some(0) {
            return Err(RunError::Config("plan: p, horizon and replications must be at least 1".into()));
        }
        if p.p.fixed().is_some() != p.burn_in.fixed().is_some() {
            return Err(RunError::Config("plan: p and burn_in must both be numbers or both be \"auto\"".into()));
        }
        self.thresholds().validate().map_err(|e| RunError::Setup { what: "thresholds".into(), source: e })?;
        self.phi.validate().map_err(|e| RunError::Setup { what: "phi".into(), source: e })?;
        for (i, t) in self.tasks.iter().enumerate() {
            t.check().map_err(|m| RunError::Config(format!("task '{}' (#{i}): {m}", t.kind())))?;
        }
        if self.tasks.is_empty() {
            return Err(RunError::Config("no tasks".into()));
        }
        self.model.build(self.phi).map_err(|e| RunError::Setup { what: "model".into(), source: e })
    }

    /// CSV file stem per task: the task kind, numbered from the second
    /// occurrence on (`clt`, `clt-2`, ...).
    pub fn task_stems(&self) -> Vec<String> {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        self.tasks
            .iter()
            .map(|t| {
                let k = seen.entry(t.kind()).or_insert(0);
                *k += 1;
                if *k == 1 {
                    t.kind().to_string()
                } else {
                    format!("{}-{}", t.kind(), k)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AR1: &str = r#"{
        "model": {"model": "nonlinear_ar", "terms": [{"lag": 1, "weight": 0.5, "transform": "identity"}], "noise": {"kind": "normal", "mean": 0.0, "sd": 1.0}},
        "phi": {"family": "power", "m": 1.0},
        "plan": {"p": "auto", "burn_in": "auto", "horizon": 10, "replications": 5, "seed": 1},
        "tasks": [{"task": "tau-bound", "r": [1, 2]}, {"task": "simulate"}, {"task": "tau-bound", "r": [3]}],
        "output": "out"
    }"#;

    #[test]
    fn parses_and_names_tasks() {
        let c = ExperimentConfig::from_json(AR1).unwrap();
        assert_eq!(c.plan.p, Count::Auto(Auto::Auto));
        assert_eq!(c.task_stems(), vec!["tau-bound", "simulate", "tau-bound-2"]);
        let m = c.validate().unwrap();
        assert_eq!(m.a(), 0.5);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = AR1.replace("\"seed\": 1", "\"seed\": 1, \"sed\": 2");
        assert!(matches!(ExperimentConfig::from_json(&bad), Err(RunError::Config(_))));
        let bad = AR1.replace("\"r\": [3]", "\"r\": [3], \"extra\": true");
        assert!(ExperimentConfig::from_json(&bad).is_err());
        let bad = AR1.replace("\"sd\": 1.0", "\"sd\": 1.0, \"scale\": 2");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn overrides_and_manifest_round_trip() {
        let c = ExperimentConfig::from_json(AR1).unwrap().resolved(Some(9), Some("elsewhere".into()));
        assert_eq!(c.plan.seed, 9);
        assert_eq!(c.thresholds().ks_alpha, 0.01);
        let manifest = serde_json::json!({ MANIFEST_KEY: 1, "config": c });
        let back = ExperimentConfig::from_json(&manifest.to_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation_errors() {
        let c = ExperimentConfig::from_json(&AR1.replace("\"weight\": 0.5", "\"weight\": 1.5")).unwrap();
        assert_eq!(c.validate().unwrap_err().exit_code(), 2);
        let c = ExperimentConfig::from_json(&AR1.replace("\"burn_in\": \"auto\"", "\"burn_in\": 3")).unwrap();
        assert!(matches!(c.validate(), Err(RunError::Config(_))));
        let c = ExperimentConfig::from_json(&AR1.replace("[1, 2]", "[]")).unwrap();
        assert!(matches!(c.validate(), Err(RunError::Config(_))));
    }
}
