//! Radiation environment: intensity series, density and sleep-probability
//! mappings, and SEE sleep sampling.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constellation::csv_to_error;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelLabel {
    Low,
    Mean,
    High,
    Custom,
}

impl LevelLabel {
    /// Nominal intensity for the synthetic levels.
    pub fn nominal_intensity(self) -> Option<f64> {
        match self {
            LevelLabel::Low => Some(0.2),
            LevelLabel::Mean => Some(0.5),
            LevelLabel::High => Some(0.8),
            LevelLabel::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LevelLabel::Low => "low",
            LevelLabel::Mean => "mean",
            LevelLabel::High => "high",
            LevelLabel::Custom => "custom",
        }
    }
}

impl std::str::FromStr for LevelLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(LevelLabel::Low),
            "mean" => Ok(LevelLabel::Mean),
            "high" => Ok(LevelLabel::High),
            "custom" => Ok(LevelLabel::Custom),
            other => Err(format!("unknown radiation level `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationSample {
    pub t: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiationSeries {
    samples: Vec<RadiationSample>,
    pub level: LevelLabel,
}

impl RadiationSeries {
    /// Builds a series from already-normalized samples.
    pub fn new(samples: Vec<RadiationSample>, level: LevelLabel) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::config("radiation", "series has no samples"));
        }
        for w in samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::config(
                    "radiation",
                    format!("sample times must increase ({} then {})", w[0].t, w[1].t),
                ));
            }
        }
        if samples.iter().any(|s| !(0.0..=1.0).contains(&s.intensity)) {
            return Err(Error::config("radiation", "intensity outside [0, 1]"));
        }
        Ok(Self { samples, level })
    }

    /// Constant series covering `[0, horizon]`.
    pub fn constant(intensity: f64, horizon: f64) -> Result<Self> {
        let mut samples = vec![RadiationSample { t: 0.0, intensity }];
        if horizon > 0.0 {
            samples.push(RadiationSample { t: horizon, intensity });
        }
        Self::new(samples, LevelLabel::Custom)
    }

    pub fn samples(&self) -> &[RadiationSample] {
        &self.samples
    }

    pub fn last_t(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    pub fn covers(&self, horizon: f64) -> bool {
        self.last_t() >= horizon
    }

    /// Zero-order hold lookup.
    pub fn intensity_at(&self, t: f64) -> Result<f64> {
        let first = self.samples[0].t;
        if t < first {
            return Err(Error::BeforeFirstSample { t, first });
        }
        let idx = self.samples.partition_point(|s| s.t <= t);
        Ok(self.samples[idx - 1].intensity)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_to_error(path, e))?;
        w.write_record(["t_seconds", "index"])?;
        for s in &self.samples {
            w.write_record([s.t.to_string(), s.intensity.to_string()])?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// Reads a `t_seconds,index` file. Raw index values are min-max normalized
/// over the file unless `bounds` pins the raw range (values clamped into it).
pub fn load_series(path: &Path, bounds: Option<(f64, f64)>) -> Result<RadiationSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut raw: Vec<(f64, f64)> = Vec::new();
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',').map(str::trim);
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(line_no, "expected two fields `t_seconds,index`".into()));
        };
        if raw.is_empty() && a == "t_seconds" {
            continue;
        }
        let t: f64 = a.parse().map_err(|_| parse_err(line_no, format!("bad time `{a}`")))?;
        let v: f64 = b.parse().map_err(|_| parse_err(line_no, format!("bad index `{b}`")))?;
        if !t.is_finite() || !v.is_finite() {
            return Err(parse_err(line_no, "non-finite value".into()));
        }
        if let Some(&(prev, _)) = raw.last() {
            if t <= prev {
                return Err(Error::NonMonotoneTime {
                    path: path.to_path_buf(),
                    line: line_no,
                    t,
                });
            }
        }
        raw.push((t, v));
    }
    if raw.is_empty() {
        return Err(Error::EmptySeries(path.to_path_buf()));
    }
    let (lo, hi) = bounds.unwrap_or_else(|| {
        raw.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                (lo.min(v), hi.max(v))
            })
    });
    let span = hi - lo;
    let samples = raw
        .into_iter()
        .map(|(t, v)| RadiationSample {
            t,
            intensity: if span > 0.0 {
                ((v - lo) / span).clamp(0.0, 1.0)
            } else {
                0.0
            },
        })
        .collect();
    RadiationSeries::new(samples, LevelLabel::Custom)
}

/// Constant-mean synthetic series sampled every `interval` seconds on
/// `[0, horizon)` with uniform jitter `±jitter`, clamped to `[0, 1]`.
pub fn synth_series<R: Rng>(
    level: LevelLabel,
    horizon: f64,
    interval: f64,
    jitter: f64,
    rng: &mut R,
) -> Result<RadiationSeries> {
    if !(horizon > 0.0) {
        return Err(Error::NonPositiveHorizon(horizon));
    }
    if !(interval > 0.0) {
        return Err(Error::config("interval", "must be positive"));
    }
    let mean = level
        .nominal_intensity()
        .ok_or_else(|| Error::config("radiation.level", "custom level cannot be synthesized"))?;
    let n = (horizon / interval).ceil() as usize;
    let samples = (0..n)
        .map(|k| {
            let noise = if jitter > 0.0 {
                rng.gen_range(-jitter..=jitter)
            } else {
                0.0
            };
            RadiationSample {
                t: k as f64 * interval,
                intensity: (mean + noise).clamp(0.0, 1.0),
            }
        })
        .collect();
    RadiationSeries::new(samples, level)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiationModelParams {
    /// kg/km³ at the scenario altitude for zero intensity.
    pub density_base: f64,
    pub density_gain: f64,
    pub sleep_p_min: f64,
    pub sleep_p_max: f64,
    pub sleep_steepness: f64,
}

impl Default for RadiationModelParams {
    fn default() -> Self {
        Self {
            density_base: 0.173,
            density_gain: 4.368,
            sleep_p_min: 0.0,
            sleep_p_max: 0.01,
            sleep_steepness: 2.0,
        }
    }
}

impl RadiationModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("density_base", self.density_base),
            ("density_gain", self.density_gain),
            ("sleep_p_min", self.sleep_p_min),
            ("sleep_p_max", self.sleep_p_max),
            ("sleep_steepness", self.sleep_steepness),
        ];
        for (k, v) in fields {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(
                    format!("radiation.{k}"),
                    "must be finite and nonnegative",
                ));
            }
        }
        if self.sleep_p_min > self.sleep_p_max || self.sleep_p_max > 1.0 {
            return Err(Error::config(
                "radiation.sleep_p_max",
                "need sleep_p_min <= sleep_p_max <= 1",
            ));
        }
        Ok(())
    }
}

/// Atmospheric density in kg/km³.
pub fn density(intensity: f64, params: &RadiationModelParams) -> f64 {
    params.density_base * (1.0 + params.density_gain * intensity)
}

pub fn sleep_probability(intensity: f64, params: &RadiationModelParams) -> f64 {
    params.sleep_p_min + (params.sleep_p_max - params.sleep_p_min) * intensity.powf(params.sleep_steepness)
}

/// Draws one uniform per entry of `ids`, in order, and returns those that
/// fall below `p`. Callers pass the full satellite list in (plane, slot)
/// order so the random stream stays aligned between runs.
pub fn sample_see_events<T: Copy, R: Rng>(ids: &[T], p: f64, rng: &mut R) -> Vec<T> {
    ids.iter()
        .filter_map(|&id| (rng.gen::<f64>() < p).then_some(id))
        .collect()
}
