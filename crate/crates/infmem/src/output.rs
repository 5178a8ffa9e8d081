//! CSV tables and the run manifest.

use std::path::Path;

use serde::Serialize;

use crate::config::{ExperimentConfig, MANIFEST_KEY};
use crate::error::{Result, RunError};
use crate::tasks::TaskOutput;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv(path: &Path, out: &TaskOutput) -> Result<()> {
    let err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => RunError::io(path, io),
        other => RunError::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(&out.header).map_err(err)?;
    for row in &out.rows {
        w.write_record(row).map_err(err)?;
    }
    w.flush().map_err(|e| RunError::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskRecord {
    pub task: String,
    pub csv: String,
    pub pass: bool,
    pub report: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub threads: usize,
    /// Unix time at start, seconds.
    pub started: u64,
    pub wall_time_s: f64,
    pub tasks: Vec<TaskRecord>,
    pub pass: bool,
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        debug_assert_eq!(MANIFEST_KEY, "manifest_version");
        let text = serde_json::to_string_pretty(self).map_err(|e| RunError::io(path, e.into()))?;
        std::fs::write(path, text + "\n").map_err(|e| RunError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 2.5e17, -0.0, f64::INFINITY] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(3.0), "3.0");
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let out = TaskOutput { header: vec!["r".into(), "bound".into()], rows: vec![vec!["1".into(), fmt_f64(0.5)]], pass: true, report: serde_json::Value::Null };
        write_csv(&path, &out).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "r,bound\n1,0.5\n");
    }
}
