//! Output files: manifest, per-interval metrics, telemetry, summary and
//! comparison tables.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::engine::{reduction_pct, IntervalMetrics, RunReport, RunSummary, TelemetrySnapshot};
use crate::error::{Error, Result};
use crate::routing::Policy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: Option<PathBuf>,
    /// Fully resolved config as TOML; loading it reproduces the run.
    pub config: String,
    pub output_dir: PathBuf,
    pub tool_version: String,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(config_path: Option<&Path>, config: &ScenarioConfig, output_dir: &Path) -> Self {
        Self {
            config_path: config_path.map(Path::to_path_buf),
            config: config.to_toml_string(),
            output_dir: output_dir.to_path_buf(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
        }
    }
}

/// Writes via a sibling temp file and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("serializable");
    s.push(b'\n');
    s
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    write_atomic(&dir.join("manifest.json"), &json(manifest))
}

pub fn write_summary(dir: &Path, summary: &RunSummary) -> Result<()> {
    write_atomic(&dir.join("summary.json"), &json(summary))
}

fn csv_bytes<F>(header: &[&str], fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> std::result::Result<(), csv::Error>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}

pub fn metrics_csv(metrics: &[IntervalMetrics]) -> Result<Vec<u8>> {
    csv_bytes(
        &[
            "t",
            "mean_ddod",
            "max_ddod",
            "mean_latency_s",
            "p95_latency_s",
            "reroutes",
            "sleeps",
            "shutdowns_cum",
            "drops",
        ],
        |w| {
            for m in metrics {
                w.write_record([
                    m.t.to_string(),
                    m.mean_ddod.to_string(),
                    m.max_ddod.to_string(),
                    m.mean_latency().to_string(),
                    m.p95_latency().to_string(),
                    m.reroutes.to_string(),
                    m.sleeps.to_string(),
                    m.shutdowns_cum.to_string(),
                    m.drops.to_string(),
                ])?;
            }
            Ok(())
        },
    )
}

pub fn telemetry_csv(telemetry: &[TelemetrySnapshot]) -> Result<Vec<u8>> {
    csv_bytes(&["t", "plane", "slot", "dod", "beta_tid", "beta_tnid", "mode"], |w| {
        for snap in telemetry {
            for s in &snap.satellites {
                w.write_record([
                    snap.t.to_string(),
                    s.id.plane.to_string(),
                    s.id.slot.to_string(),
                    s.dod.to_string(),
                    s.beta_tid.to_string(),
                    s.beta_tnid.to_string(),
                    s.mode.as_str().to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

/// Writes metrics.csv, telemetry.csv and summary.json into `dir`.
pub fn write_run(dir: &Path, report: &RunReport) -> Result<()> {
    write_atomic(&dir.join("metrics.csv"), &metrics_csv(&report.metrics)?)?;
    write_atomic(&dir.join("telemetry.csv"), &telemetry_csv(&report.telemetry)?)?;
    write_summary(dir, &report.summary)
}

/// Seed-averaged results for one (radiation level, policy) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub level: String,
    pub policy: Policy,
    pub seeds: usize,
    pub mean_ddod: f64,
    pub latency_mean_s: f64,
    pub shutdowns: f64,
    pub reroutes: f64,
}

impl ComparisonRow {
    pub fn from_runs(level: &str, policy: Policy, runs: &[RunSummary]) -> Self {
        let n = runs.len().max(1) as f64;
        let avg = |f: &dyn Fn(&RunSummary) -> f64| runs.iter().map(f).sum::<f64>() / n;
        Self {
            level: level.to_string(),
            policy,
            seeds: runs.len(),
            mean_ddod: avg(&|r| r.mean_ddod),
            latency_mean_s: avg(&|r| r.latency_mean_s),
            shutdowns: avg(&|r| r.total_shutdowns as f64),
            reroutes: avg(&|r| r.total_reroutes as f64),
        }
    }
}

/// One row per (level, policy). For every other policy `q` in the table,
/// three columns `vs_<q>_{ddod,latency,shutdowns}_pct` give the percentage
/// reduction of this row relative to `q` at the same level.
pub fn comparison_csv(rows: &[ComparisonRow], policies: &[Policy]) -> Result<Vec<u8>> {
    let mut header: Vec<String> = [
        "level",
        "policy",
        "seeds",
        "mean_ddod",
        "latency_mean_s",
        "shutdowns",
        "reroutes",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for q in policies {
        for m in ["ddod", "latency", "shutdowns"] {
            header.push(format!("vs_{}_{}_pct", q.as_str(), m));
        }
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_bytes(&header_refs, |w| {
        for r in rows {
            let mut rec = vec![
                r.level.clone(),
                r.policy.as_str().to_string(),
                r.seeds.to_string(),
                r.mean_ddod.to_string(),
                r.latency_mean_s.to_string(),
                r.shutdowns.to_string(),
                r.reroutes.to_string(),
            ];
            for q in policies {
                let base = rows.iter().find(|b| b.level == r.level && b.policy == *q);
                for m in 0..3 {
                    rec.push(match base {
                        Some(b) => {
                            let (a, bb) = match m {
                                0 => (r.mean_ddod, b.mean_ddod),
                                1 => (r.latency_mean_s, b.latency_mean_s),
                                _ => (r.shutdowns, b.shutdowns),
                            };
                            reduction_pct(a, bb).to_string()
                        }
                        None => String::new(),
                    });
                }
            }
            w.write_record(&rec)?;
        }
        Ok(())
    })
}
