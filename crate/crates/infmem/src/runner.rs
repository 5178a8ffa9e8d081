//! Runs a validated configuration and writes its artifacts.

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};
use crate::output::{write_csv, Manifest, TaskRecord};
use crate::parallel::RayonReplicator;
use crate::tasks::{run_task, TaskContext};

/// What a finished run left behind.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output: PathBuf,
    pub manifest: PathBuf,
    /// `(csv stem, pass)` per task.
    pub verdicts: Vec<(String, bool)>,
    pub pass: bool,
}

/// Runs every task in order. `config` should already carry any command-line
/// overrides; `threads = None` uses one thread per CPU.
pub fn run(config: ExperimentConfig, threads: Option<usize>) -> Result<RunSummary> {
    let config = config.resolved(None, None);
    let model = config.validate()?;
    let replicator = RayonReplicator::new(threads).map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    std::fs::create_dir_all(&config.output).map_err(|e| RunError::io(&config.output, e))?;

    let cx = TaskContext { model: &model, phi: config.phi, plan: config.plan, thresholds: config.thresholds(), replicator: &replicator };
    let mut records = Vec::with_capacity(config.tasks.len());
    for (index, (task, stem)) in config.tasks.iter().zip(config.task_stems()).enumerate() {
        let out = run_task(task, &cx).map_err(|source| RunError::Task { task: stem.clone(), index, source })?;
        let csv = format!("{stem}.csv");
        write_csv(&config.output.join(&csv), &out)?;
        records.push(TaskRecord { task: stem, csv, pass: out.pass, report: out.report });
    }

    let pass = records.iter().all(|r| r.pass);
    let verdicts = records.iter().map(|r| (r.task.clone(), r.pass)).collect();
    let manifest = Manifest {
        manifest_version: 1,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        seed: config.plan.seed,
        threads: replicator.threads(),
        started,
        wall_time_s: clock.elapsed().as_secs_f64(),
        tasks: records,
        pass,
        config,
    };
    let path = manifest.config.output.join("manifest.json");
    manifest.write(&path)?;
    Ok(RunSummary { output: manifest.config.output.clone(), manifest: path, verdicts, pass })
}
