use std::path::Path;
use std::process::{Command, Output};

use ralt::engine::synthesize_series;
use ralt::radiation::{load_series, LevelLabel};
use ralt::ScenarioConfig;

const TINY: &str = "horizon_s = 120.0\ninterval_s = 60.0\n\n[constellation]\nplanes = 2\nsats_per_plane = 2\n\n[traffic]\nn_cells = 4\n";

fn ralt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ralt"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn tiny_config(dir: &Path) -> String {
    let p = dir.join("tiny.toml");
    std::fs::write(&p, TINY).unwrap();
    p.to_string_lossy().into_owned()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn run_writes_one_metrics_row_per_interval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path());
    let out = ralt(&["run", "--config", &cfg, "--out", "o"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let o = dir.path().join("o");
    assert_eq!(csv_rows(&o.join("metrics.csv")).len(), 2);
    // 4 satellites per interval
    assert_eq!(csv_rows(&o.join("telemetry.csv")).len(), 8);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(o.join("manifest.json")).unwrap()).unwrap();
    let replay = ScenarioConfig::from_toml_str(manifest["config"].as_str().unwrap(), &[]).unwrap();
    assert_eq!(replay.constellation.planes, 2);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(o.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["policy"], "ralt");
    assert_eq!(summary["intervals"], 2);
}

#[test]
fn set_overrides_the_policy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path());
    let out = ralt(
        &["run", "--config", &cfg, "--set", "policy=phoenix", "--out", "o"],
        dir.path(),
    );
    assert!(out.status.success());
    let summary = std::fs::read_to_string(dir.path().join("o/summary.json")).unwrap();
    assert!(summary.contains("\"policy\": \"phoenix\""));
}

#[test]
fn missing_config_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = ralt(&["run", "--config", "does/not/exist.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("does/not/exist.toml"));
}

#[test]
fn unknown_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path());
    let out = ralt(&["run", "--config", &cfg, "--set", "battery.volume=3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_has_three_delta_columns_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_config(dir.path());
    let out = ralt(
        &[
            "compare", "--config", &cfg, "--seeds", "2", "--levels", "low,high", "--out", "c",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("c/comparison.csv")).unwrap();
    let header = r.headers().unwrap().clone();
    assert_eq!(header.len(), 7 + 3 * 3);
    assert!(header.iter().any(|h| h == "vs_umbra_shutdowns_pct"));
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 2 * 3);
    for row in &rows {
        assert_eq!(&row[2], "2");
        // a policy compared with itself improves by exactly zero
        let own = header
            .iter()
            .position(|h| h == format!("vs_{}_ddod_pct", &row[1]))
            .unwrap();
        assert_eq!(row[own].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn synth_radiation_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = ralt(
        &[
            "synth-radiation",
            "--level",
            "mean",
            "--horizon",
            "3600",
            "--seed",
            "5",
            "--out",
            "r.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("r.csv");
    assert_eq!(csv_rows(&path).len(), 60);
    let loaded = load_series(&path, Some((0.0, 1.0))).unwrap();
    let mut cfg = ScenarioConfig {
        seed: 5,
        horizon_s: 3600.0,
        ..ScenarioConfig::default()
    };
    cfg.radiation.level = LevelLabel::Mean;
    let expected = synthesize_series(&cfg).unwrap();
    assert_eq!(loaded.samples(), expected.samples());
}
