//! Fits the intensity-to-density constants to recovery-energy targets.
//!
//! Recovery energy over one orbit is drag (affine in intensity through the
//! density mapping) plus annealing. The annealing expectation is held fixed
//! across intensities: one threshold-to-clear cycle, ignoring the damage
//! that keeps accruing while the heater runs. The two targets then pin the
//! density constants in closed form.

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::constellation::ConstellationKind;
use crate::damage::{accumulate, apply_annealing, needs_annealing, DamageState};
use crate::engine::Simulation;
use crate::error::{Error, Result};
use crate::power::{annealing_energy, drag_energy};
use crate::radiation::{LevelLabel, RadiationSeries};
use crate::routing::Policy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub intensity: f64,
    pub target_pct: f64,
    pub annealing_wh: f64,
    /// Filled in by [`verify`].
    pub simulated_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub density_base: f64,
    pub density_gain: f64,
    pub horizon_s: f64,
    pub capacity_wh: f64,
    pub low: CalibrationPoint,
    pub mean: CalibrationPoint,
}

impl Calibration {
    pub fn max_residual_pct(&self) -> Option<f64> {
        let a = self.low.simulated_pct? - self.low.target_pct;
        let b = self.mean.simulated_pct? - self.mean.target_pct;
        Some(a.abs().max(b.abs()))
    }
}

/// One orbital period, rounded to whole intervals.
pub fn orbit_horizon(config: &ScenarioConfig) -> f64 {
    let dt = config.interval_s;
    let steps = (config.constellation.spec().period_s() / dt).round().max(1.0);
    steps * dt
}

/// A single satellite starting at the annealing threshold with a full
/// battery, no traffic and no SEE sleeps. PHOENIX is used so the energy
/// feasibility check cannot defer annealing.
pub fn single_satellite_config(base: &ScenarioConfig) -> ScenarioConfig {
    let mut c = base.clone();
    c.policy = Policy::Phoenix;
    c.constellation.kind = ConstellationKind::WalkerDelta;
    c.constellation.planes = 1;
    c.constellation.sats_per_plane = 1;
    c.constellation.phasing_deg = Some(0.0);
    c.traffic.n_cells = 0;
    c.radiation.file = None;
    c.radiation.jitter = 0.0;
    c.radiation.sleep_p_min = 0.0;
    c.radiation.sleep_p_max = 0.0;
    c.battery.initial_dod_min = 0.0;
    c.battery.initial_dod_max = 0.0;
    let start = c.damage.gamma_tid.max(c.damage.gamma_tnid);
    c.damage.initial_min = start;
    c.damage.initial_max = start;
    c.horizon_s = orbit_horizon(&c);
    c
}

/// Annealing energy the engine will spend over `steps` intervals at a fixed
/// intensity, starting from `state`.
fn annealing_wh(config: &ScenarioConfig, mut state: DamageState, intensity: f64, steps: usize) -> f64 {
    let d = &config.damage;
    let dt = config.interval_s;
    let mut annealing = false;
    let mut wh = 0.0;
    for _ in 0..steps {
        state = accumulate(&state, intensity, dt, d);
        let (tid, tnid) = needs_annealing(&state, d);
        annealing = tid || tnid || (annealing && !state.is_clear());
        if annealing {
            state = apply_annealing(&state, dt, d);
            wh += annealing_energy(dt, &config.energy);
        }
    }
    wh
}

/// Solves for `(density_base, density_gain)` so one orbit of recovery
/// energy equals `low_pct` / `mean_pct` of capacity at the Low / Mean
/// intensities.
pub fn calibrate(base: &ScenarioConfig, low_pct: f64, mean_pct: f64) -> Result<Calibration> {
    for (name, v) in [("low", low_pct), ("mean", mean_pct)] {
        if !(v > 0.0 && v < 100.0) {
            return Err(Error::config(name, format!("target {v} must be in (0, 100)")));
        }
    }
    let cfg = single_satellite_config(base);
    cfg.validate()?;
    let horizon = cfg.horizon_s;
    let steps = cfg.n_steps();
    let capacity = cfg.battery.capacity_wh;
    let i_low = LevelLabel::Low.nominal_intensity().expect("nominal");
    let i_mean = LevelLabel::Mean.nominal_intensity().expect("nominal");

    let d = &cfg.damage;
    let start = DamageState::new(d.initial_min * d.beta_max_tid, {
        let mut comps = d.components()?;
        for c in &mut comps {
            c.local = d.initial_min * d.beta_max_tnid.min(1.0);
        }
        comps
    })?;
    let anneal = annealing_wh(&cfg, start, 0.0, steps);
    let (a_low, a_mean) = (anneal, anneal);

    // drag energy per unit density over the horizon
    let unit = drag_energy(1.0, cfg.constellation.altitude_km, horizon, &cfg.energy);
    let e_low = low_pct / 100.0 * capacity - a_low;
    let e_mean = mean_pct / 100.0 * capacity - a_mean;
    // x + y I = e / unit, with x = rho0 and y = rho0 k
    let y = (e_mean / unit - e_low / unit) / (i_mean - i_low);
    let x = e_low / unit - y * i_low;
    if y < 0.0 {
        return Err(Error::Infeasible(format!(
            "mean target {mean_pct}% needs less drag than low target {low_pct}%"
        )));
    }
    if x <= 0.0 {
        return Err(Error::Infeasible(format!(
            "targets imply non-positive base density {x:.4} kg/km^3 (annealing alone uses {:.2}% at low)",
            a_low / capacity * 100.0
        )));
    }
    Ok(Calibration {
        density_base: x,
        density_gain: if y == 0.0 { 0.0 } else { y / x },
        horizon_s: horizon,
        capacity_wh: capacity,
        low: CalibrationPoint {
            intensity: i_low,
            target_pct: low_pct,
            annealing_wh: a_low,
            simulated_pct: None,
        },
        mean: CalibrationPoint {
            intensity: i_mean,
            target_pct: mean_pct,
            annealing_wh: a_mean,
            simulated_pct: None,
        },
    })
}

/// Recovery energy, as a percentage of capacity, that the engine reports
/// for one orbit of the single-satellite scenario at a constant intensity.
pub fn simulate_recovery_pct(base: &ScenarioConfig, intensity: f64) -> Result<f64> {
    let cfg = single_satellite_config(base);
    let series = RadiationSeries::constant(intensity, cfg.horizon_s)?;
    let mut sim = Simulation::with_series(&cfg, series)?;
    sim.set_record_telemetry(false);
    sim.run_to_end();
    Ok(sim.recovery_wh_total() / cfg.battery.capacity_wh * 100.0)
}

/// Re-runs the engine with the fitted constants and records the residuals.
pub fn verify(base: &ScenarioConfig, mut cal: Calibration) -> Result<Calibration> {
    let mut cfg = base.clone();
    cfg.radiation.density_base = cal.density_base;
    cfg.radiation.density_gain = cal.density_gain;
    cal.low.simulated_pct = Some(simulate_recovery_pct(&cfg, cal.low.intensity)?);
    cal.mean.simulated_pct = Some(simulate_recovery_pct(&cfg, cal.mean.intensity)?);
    Ok(cal)
}
