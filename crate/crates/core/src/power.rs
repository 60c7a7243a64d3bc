//! Battery and energy accounting. All energies are in Wh.

use serde::{Deserialize, Serialize};

use crate::constellation::{EARTH_RADIUS_KM, MU_KM3_S2};
use crate::damage::{needs_annealing, DamageParams, DamageState};
use crate::error::{Error, Result};
use crate::radiation::{density, RadiationModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryState {
    pub capacity_wh: f64,
    /// Fraction of capacity discharged.
    pub dod: f64,
}

impl BatteryState {
    pub fn new(capacity_wh: f64, dod: f64) -> Self {
        Self {
            capacity_wh,
            dod: dod.clamp(0.0, 1.0),
        }
    }

    pub fn stored_wh(&self) -> f64 {
        self.capacity_wh * (1.0 - self.dod)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyParams {
    /// W drawn while annealing.
    pub anneal_w: f64,
    /// W·min per Mb transmitted.
    pub tx_wmin_per_mb: f64,
    /// W harvested while sunlit.
    pub harvest_w: f64,
    /// Drag coefficient.
    pub cd: f64,
    pub area_m2: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            anneal_w: 40.0,
            tx_wmin_per_mb: 0.08,
            harvest_w: 1200.0,
            cd: 2.2,
            area_m2: 10.0,
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("anneal_w", self.anneal_w),
            ("tx_wmin_per_mb", self.tx_wmin_per_mb),
            ("harvest_w", self.harvest_w),
            ("cd", self.cd),
            ("area_m2", self.area_m2),
        ];
        for (k, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("energy.{k}"), "must be positive"));
            }
        }
        Ok(())
    }
}

/// Energy to offset drag work over `interval_s`: P = ½ ρ v³ C_d A.
pub fn drag_energy(density_kg_km3: f64, altitude_km: f64, interval_s: f64, params: &EnergyParams) -> f64 {
    let rho = density_kg_km3 * 1e-9;
    let v = (MU_KM3_S2 / (EARTH_RADIUS_KM + altitude_km)).sqrt() * 1e3;
    let power_w = 0.5 * rho * v * v * v * params.cd * params.area_m2;
    power_w * interval_s / 3600.0
}

pub fn transmission_energy(rate_mbps: f64, duration_s: f64, params: &EnergyParams) -> f64 {
    rate_mbps * duration_s * params.tx_wmin_per_mb / 60.0
}

pub fn annealing_energy(duration_s: f64, params: &EnergyParams) -> f64 {
    params.anneal_w * duration_s / 3600.0
}

pub fn harvest_energy(sunlit: bool, duration_s: f64, params: &EnergyParams) -> f64 {
    if sunlit {
        params.harvest_w * duration_s / 3600.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryStep {
    pub state: BatteryState,
    /// Consumption ran past empty.
    pub exhausted: bool,
}

pub fn step_battery(state: BatteryState, consumed_wh: f64, harvested_wh: f64) -> BatteryStep {
    let raw = state.dod + (consumed_wh - harvested_wh) / state.capacity_wh;
    BatteryStep {
        state: BatteryState {
            capacity_wh: state.capacity_wh,
            dod: raw.clamp(0.0, 1.0),
        },
        exhausted: raw > 1.0,
    }
}

/// Drag plus, when annealing is due, annealing energy over `interval_s`.
pub fn recovery_energy(
    damage: &DamageState,
    intensity: f64,
    altitude_km: f64,
    interval_s: f64,
    energy: &EnergyParams,
    radiation: &RadiationModelParams,
    damage_params: &DamageParams,
) -> f64 {
    let drag = drag_energy(density(intensity, radiation), altitude_km, interval_s, energy);
    let (tid_due, tnid_due) = needs_annealing(damage, damage_params);
    let anneal = if tid_due || tnid_due {
        annealing_energy(interval_s, energy)
    } else {
        0.0
    };
    drag + anneal
}
