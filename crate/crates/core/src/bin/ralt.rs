use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ralt::calibrate::{calibrate, verify};
use ralt::engine::{run_with, synthesize_series};
use ralt::radiation::LevelLabel;
use ralt::report::{comparison_csv, write_atomic, write_manifest, write_run, ComparisonRow, RunManifest};
use ralt::{Error, Policy, Result, ScenarioConfig};

#[derive(Parser)]
#[command(name = "ralt", version, about = "Radiation-aware LEO rerouting simulator")]
struct Cli {
    /// Scenario file (TOML). Defaults apply to every missing key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (for `synth-radiation`, the CSV file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Dotted-key override, e.g. `--set battery.capacity_wh=4000`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write metrics, telemetry and a summary.
    Run,
    /// Paired-seed comparison across policies and radiation levels.
    Compare {
        #[arg(long, value_delimiter = ',', default_value = "ralt,phoenix,umbra")]
        policies: Vec<Policy>,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Radiation levels; defaults to the configured one.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<LevelLabel>,
    },
    /// Fit density constants to recovery-energy targets (percent of capacity).
    Calibrate {
        #[arg(long, default_value_t = 50.99)]
        low: f64,
        #[arg(long, default_value_t = 85.87)]
        mean: f64,
    },
    /// Write a synthetic radiation series as CSV.
    SynthRadiation {
        #[arg(long)]
        level: LevelLabel,
        #[arg(long, default_value_t = 86_400.0)]
        horizon: f64,
        #[arg(long, default_value_t = 60.0)]
        interval: f64,
    },
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p, &cli.overrides)?,
        None => ScenarioConfig::from_toml_str("", &cli.overrides)?,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("ralt-out"))
}

fn cmd_run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    let dir = out_dir(cli);
    ensure_dir(&dir)?;
    write_manifest(&dir, &RunManifest::new(cli.config.as_deref(), &cfg, &dir))?;
    let report = run_with(&cfg, true)?;
    write_run(&dir, &report)?;
    let s = &report.summary;
    println!(
        "{} seed {}: {} intervals, mean dDoD {:.6}, mean latency {:.4} s, shutdowns {}, reroutes {}",
        s.policy, s.seed, s.intervals, s.mean_ddod, s.latency_mean_s, s.total_shutdowns, s.total_reroutes
    );
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_compare(cli: &Cli, policies: &[Policy], seeds: u64, levels: &[LevelLabel]) -> Result<()> {
    if seeds == 0 {
        return Err(Error::config("seeds", "need at least one seed"));
    }
    let base = load_config(cli)?;
    let levels: Vec<Option<LevelLabel>> = if levels.is_empty() {
        vec![None]
    } else {
        levels.iter().copied().map(Some).collect()
    };
    let dir = out_dir(cli);
    ensure_dir(&dir)?;
    write_manifest(&dir, &RunManifest::new(cli.config.as_deref(), &base, &dir))?;
    let mut rows = Vec::new();
    for level in &levels {
        let mut cfg = base.clone();
        if let Some(l) = level {
            cfg.radiation.level = *l;
            cfg.radiation.file = None;
        }
        let label = if cfg.radiation.file.is_some() {
            "custom"
        } else {
            cfg.radiation.level.as_str()
        };
        for &policy in policies {
            let mut runs = Vec::new();
            for k in 0..seeds {
                let mut c = cfg.clone();
                c.policy = policy;
                c.seed = base.seed.wrapping_add(k);
                runs.push(run_with(&c, false)?.summary);
            }
            let row = ComparisonRow::from_runs(label, policy, &runs);
            println!(
                "{:<6} {:<8} dDoD {:.6}  latency {:.4} s  shutdowns {:.2}  reroutes {:.2}",
                row.level,
                row.policy.as_str(),
                row.mean_ddod,
                row.latency_mean_s,
                row.shutdowns,
                row.reroutes
            );
            rows.push(row);
        }
    }
    let path = dir.join("comparison.csv");
    write_atomic(&path, &comparison_csv(&rows, policies)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_calibrate(cli: &Cli, low: f64, mean: f64) -> Result<()> {
    let base = load_config(cli)?;
    let cal = verify(&base, calibrate(&base, low, mean)?)?;
    println!("[radiation]");
    println!("density_base = {}", cal.density_base);
    println!("density_gain = {}", cal.density_gain);
    for p in [&cal.low, &cal.mean] {
        println!(
            "# I = {}: target {:.2}%, simulated {:.4}%",
            p.intensity,
            p.target_pct,
            p.simulated_pct.unwrap_or(f64::NAN)
        );
    }
    if let Some(dir) = &cli.out {
        ensure_dir(dir)?;
        let mut bytes = serde_json::to_vec_pretty(&cal).expect("serializable");
        bytes.push(b'\n');
        write_atomic(&dir.join("calibration.json"), &bytes)?;
    }
    Ok(())
}

fn cmd_synth(cli: &Cli, level: LevelLabel, horizon: f64, interval: f64) -> Result<()> {
    let mut cfg = load_config(cli)?;
    let path = cli
        .out
        .clone()
        .ok_or_else(|| Error::config("out", "synth-radiation needs --out <file.csv>"))?;
    cfg.radiation.level = level;
    cfg.horizon_s = horizon;
    cfg.interval_s = interval;
    // same stream as a run with this seed, so the file reproduces its series
    let series = synthesize_series(&cfg)?;
    series.write_csv(&path)?;
    println!("wrote {} samples to {}", series.samples().len(), path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run => cmd_run(&cli),
        Command::Compare {
            policies,
            seeds,
            levels,
        } => cmd_compare(&cli, policies, *seeds, levels),
        Command::Calibrate { low, mean } => cmd_calibrate(&cli, *low, *mean),
        Command::SynthRadiation {
            level,
            horizon,
            interval,
        } => cmd_synth(&cli, *level, *horizon, *interval),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
