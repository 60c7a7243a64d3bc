//! Scenario configuration: TOML file with dotted `--set key=value`
//! overrides. Every key has a default, so a near-empty file runs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constellation::{load_sites, ConstellationKind, ConstellationSpec, GroundSite};
use crate::damage::DamageParams;
use crate::error::{Error, Result};
use crate::power::EnergyParams;
use crate::radiation::{LevelLabel, RadiationModelParams};
use crate::routing::Policy;
use crate::traffic::{bundled_distribution, load_distribution, DiurnalParams, WeightedSite};

const BUNDLED_STATIONS: &str = include_str!("../data/ground_stations.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub policy: Policy,
    pub seed: u64,
    pub interval_s: f64,
    pub horizon_s: f64,
    pub constellation: ConstellationConfig,
    pub radiation: RadiationConfig,
    pub battery: BatteryConfig,
    pub energy: EnergyParams,
    pub damage: DamageParams,
    pub traffic: TrafficConfig,
    pub engine: EngineConfig,
    pub routing: RoutingConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            policy: Policy::Ralt,
            seed: 1,
            interval_s: 60.0,
            horizon_s: 86_400.0,
            constellation: ConstellationConfig::default(),
            radiation: RadiationConfig::default(),
            battery: BatteryConfig::default(),
            energy: EnergyParams::default(),
            damage: DamageParams::default(),
            traffic: TrafficConfig::default(),
            engine: EngineConfig::default(),
            routing: RoutingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstellationConfig {
    pub kind: ConstellationKind,
    pub planes: usize,
    pub sats_per_plane: usize,
    pub altitude_km: f64,
    pub inclination_deg: f64,
    /// Defaults to 360 / (planes * sats_per_plane).
    pub phasing_deg: Option<f64>,
    pub min_elevation_deg: f64,
    pub sun_direction: [f64; 3],
    pub sun_rotates: bool,
}

impl Default for ConstellationConfig {
    fn default() -> Self {
        let s = ConstellationSpec::starlink_shell1();
        Self {
            kind: s.kind,
            planes: s.num_planes,
            sats_per_plane: s.sats_per_plane,
            altitude_km: s.altitude_km,
            inclination_deg: s.inclination_deg,
            phasing_deg: None,
            min_elevation_deg: 25.0,
            sun_direction: [1.0, 0.0, 0.0],
            sun_rotates: false,
        }
    }
}

impl ConstellationConfig {
    pub fn spec(&self) -> ConstellationSpec {
        let total = (self.planes * self.sats_per_plane).max(1) as f64;
        ConstellationSpec {
            num_planes: self.planes,
            sats_per_plane: self.sats_per_plane,
            altitude_km: self.altitude_km,
            inclination_deg: self.inclination_deg,
            phasing_offset_deg: self.phasing_deg.unwrap_or(360.0 / total),
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiationConfig {
    /// Synthetic level; ignored when `file` is set.
    pub level: LevelLabel,
    pub file: Option<PathBuf>,
    /// Fixed raw index range for file normalization instead of file min-max.
    pub index_min: Option<f64>,
    pub index_max: Option<f64>,
    pub jitter: f64,
    pub density_base: f64,
    pub density_gain: f64,
    pub sleep_p_min: f64,
    pub sleep_p_max: f64,
    pub sleep_steepness: f64,
}

impl Default for RadiationConfig {
    fn default() -> Self {
        let m = RadiationModelParams::default();
        Self {
            level: LevelLabel::Mean,
            file: None,
            index_min: None,
            index_max: None,
            jitter: 0.05,
            density_base: m.density_base,
            density_gain: m.density_gain,
            sleep_p_min: m.sleep_p_min,
            sleep_p_max: m.sleep_p_max,
            sleep_steepness: m.sleep_steepness,
        }
    }
}

impl RadiationConfig {
    pub fn model(&self) -> RadiationModelParams {
        RadiationModelParams {
            density_base: self.density_base,
            density_gain: self.density_gain,
            sleep_p_min: self.sleep_p_min,
            sleep_p_max: self.sleep_p_max,
            sleep_steepness: self.sleep_steepness,
        }
    }

    pub fn bounds(&self) -> Result<Option<(f64, f64)>> {
        match (self.index_min, self.index_max) {
            (None, None) => Ok(None),
            (Some(lo), Some(hi)) if hi > lo => Ok(Some((lo, hi))),
            _ => Err(Error::config(
                "radiation.index_min",
                "index_min and index_max must be set together with index_min < index_max",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BatteryConfig {
    pub capacity_wh: f64,
    pub shutdown_dod: f64,
    /// Initial DoD drawn uniformly per satellite from this range.
    pub initial_dod_min: f64,
    pub initial_dod_max: f64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            capacity_wh: 5000.0,
            shutdown_dod: 0.95,
            initial_dod_min: 0.0,
            initial_dod_max: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrafficConfig {
    pub n_cells: usize,
    pub base_rate_mbps: f64,
    pub f_min: f64,
    pub peak_hour: f64,
    /// `latitude,longitude,weight` CSV; the bundled list when unset.
    pub distribution: Option<PathBuf>,
    /// `latitude,longitude,role` CSV of offload ground stations.
    pub ground_stations: Option<PathBuf>,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        let d = DiurnalParams::default();
        Self {
            n_cells: 40,
            base_rate_mbps: 300.0,
            f_min: d.f_min,
            peak_hour: d.peak_hour,
            distribution: None,
            ground_stations: None,
        }
    }
}

impl TrafficConfig {
    pub fn diurnal(&self) -> DiurnalParams {
        DiurnalParams {
            f_min: self.f_min,
            peak_hour: self.peak_hour,
        }
    }

    pub fn load_distribution(&self) -> Result<Vec<WeightedSite>> {
        match &self.distribution {
            Some(p) => load_distribution(p),
            None => Ok(bundled_distribution()),
        }
    }

    pub fn load_stations(&self) -> Result<Vec<GroundSite>> {
        match &self.ground_stations {
            Some(p) => load_sites(p),
            None => parse_bundled_stations(),
        }
    }
}

fn parse_bundled_stations() -> Result<Vec<GroundSite>> {
    #[derive(Deserialize)]
    struct Row {
        latitude: f64,
        longitude: f64,
        role: crate::constellation::SiteRole,
    }
    let mut rdr = csv::Reader::from_reader(BUNDLED_STATIONS.as_bytes());
    rdr.deserialize::<Row>()
        .map(|r| {
            let r = r?;
            GroundSite::new(r.latitude, r.longitude, r.role)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    /// Intervals a satellite stays asleep after an SEE or energy shortfall.
    pub sleep_intervals: u32,
    /// Intervals of recovery energy a recovery-aware scheduler keeps in reserve.
    pub feasibility_lookahead_intervals: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            sleep_intervals: 5,
            feasibility_lookahead_intervals: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoutingConfig {
    /// Delay weight; the battery term gets `1 - alpha`.
    pub alpha: f64,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        Self { alpha: 0.5 }
    }
}

impl ScenarioConfig {
    /// Parses TOML text, applies overrides, and validates.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| toml_error("config", &e, text))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let merged = toml::to_string(&table).map_err(|e| Error::config("config", e.to_string()))?;
        let cfg: ScenarioConfig = toml::from_str(&merged).map_err(|e| {
            if overrides.is_empty() {
                toml_error("config", &e, text)
            } else {
                toml_error("config (after --set overrides)", &e, &merged)
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a config file; relative data paths resolve against its directory.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text, overrides).map_err(|e| match e {
            Error::Config { key, msg } => Error::config(format!("{}: {key}", path.display()), msg),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.radiation.file,
            &mut cfg.traffic.distribution,
            &mut cfg.traffic.ground_stations,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon_s / self.interval_s).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.interval_s > 0.0) {
            return Err(Error::config("interval_s", "must be positive"));
        }
        if !(self.horizon_s > 0.0) {
            return Err(Error::config("horizon_s", "must be positive"));
        }
        let ratio = self.horizon_s / self.interval_s;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config("horizon_s", "must be a whole number of intervals"));
        }
        self.constellation
            .spec()
            .validate()
            .map_err(|e| Error::config("constellation", e.to_string()))?;
        if !(-90.0..=90.0).contains(&self.constellation.min_elevation_deg) {
            return Err(Error::config(
                "constellation.min_elevation_deg",
                "must lie in [-90, 90]",
            ));
        }
        let s = self.constellation.sun_direction;
        if !(s.iter().map(|v| v * v).sum::<f64>() > 0.0) {
            return Err(Error::config("constellation.sun_direction", "must be nonzero"));
        }
        self.radiation.model().validate()?;
        self.radiation.bounds()?;
        if !(0.0..=1.0).contains(&self.radiation.jitter) {
            return Err(Error::config("radiation.jitter", "must lie in [0, 1]"));
        }
        if !(self.battery.capacity_wh > 0.0) {
            return Err(Error::config("battery.capacity_wh", "must be positive"));
        }
        if !(self.battery.shutdown_dod > 0.0 && self.battery.shutdown_dod < 1.0) {
            return Err(Error::config("battery.shutdown_dod", "must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.battery.initial_dod_min)
            || !(0.0..=1.0).contains(&self.battery.initial_dod_max)
            || self.battery.initial_dod_min > self.battery.initial_dod_max
        {
            return Err(Error::config(
                "battery.initial_dod_max",
                "need 0 <= initial_dod_min <= initial_dod_max <= 1",
            ));
        }
        self.energy.validate()?;
        self.damage.validate()?;
        if self.traffic.n_cells == 1 {
            return Err(Error::config("traffic.n_cells", "need 0 or at least 2 cells"));
        }
        if !(self.traffic.base_rate_mbps >= 0.0) {
            return Err(Error::config("traffic.base_rate_mbps", "must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.traffic.f_min) {
            return Err(Error::config("traffic.f_min", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.routing.alpha) {
            return Err(Error::config("routing.alpha", "must lie in [0, 1]"));
        }
        if self.engine.sleep_intervals == 0 {
            return Err(Error::config("engine.sleep_intervals", "must be at least 1"));
        }
        Ok(())
    }
}

fn toml_error(what: &str, e: &toml::de::Error, text: &str) -> Error {
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    let msg = e.message().to_string();
    match line {
        Some(l) => Error::config(format!("{what} line {l}"), msg),
        None => Error::config(what, msg),
    }
}

/// Applies `a.b.c=value`; the value is read as TOML, falling back to a bare string.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(assignment, "override must look like key=value"))?;
    let key = key.trim();
    let raw = raw.trim();
    let value: toml::Value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::config(key, "empty key segment"));
    }
    let mut cur = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::config(key, format!("`{part}` is not a table")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}
