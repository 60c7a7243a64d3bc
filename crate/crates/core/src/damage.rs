//! TID/TNID damage accumulation, weighted TNID aggregation, annealing
//! triggers and annealing recovery.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TnidComponent {
    pub name: String,
    /// Local displacement damage in [0, 1].
    pub local: f64,
    pub weight: f64,
}

impl TnidComponent {
    pub fn new(name: impl Into<String>, local: f64, weight: f64) -> Self {
        Self {
            name: name.into(),
            local,
            weight,
        }
    }
}

/// Per-satellite accumulated damage. `beta_tnid` is always the weighted sum
/// of the component locals; weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DamageState {
    beta_tid: f64,
    components: Vec<TnidComponent>,
    beta_tnid: f64,
}

impl DamageState {
    /// Normalizes component weights; fails when they are all zero.
    pub fn new(beta_tid: f64, mut components: Vec<TnidComponent>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if components.is_empty() || components.iter().any(|c| !(c.weight >= 0.0)) || !(total > 0.0) {
            return Err(Error::DegenerateWeights);
        }
        for c in &mut components {
            c.weight /= total;
            c.local = c.local.clamp(0.0, 1.0);
        }
        let mut state = Self {
            beta_tid: beta_tid.max(0.0),
            components,
            beta_tnid: 0.0,
        };
        state.refresh();
        Ok(state)
    }

    pub fn beta_tid(&self) -> f64 {
        self.beta_tid
    }

    pub fn beta_tnid(&self) -> f64 {
        self.beta_tnid
    }

    pub fn components(&self) -> &[TnidComponent] {
        &self.components
    }

    pub fn is_clear(&self) -> bool {
        self.beta_tid == 0.0 && self.components.iter().all(|c| c.local == 0.0)
    }

    fn refresh(&mut self) {
        self.beta_tnid = weighted_sum(&self.components);
    }
}

fn weighted_sum(components: &[TnidComponent]) -> f64 {
    components.iter().map(|c| c.weight * c.local).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DamageParams {
    pub gamma_tid: f64,
    pub gamma_tnid: f64,
    pub beta_max_tid: f64,
    pub beta_max_tnid: f64,
    /// Damage units per second per unit intensity.
    pub tid_rate: f64,
    pub tnid_rate: f64,
    pub anneal_rate_per_h: f64,
    /// `name:weight` entries.
    pub tnid_components: Vec<String>,
    /// Annealing satellites stop forwarding traffic.
    pub anneal_offline: bool,
    /// Initial damage drawn uniformly from `[initial_min, initial_max]`
    /// (fractions of the respective maxima) per satellite and component.
    pub initial_min: f64,
    pub initial_max: f64,
}

impl Default for DamageParams {
    fn default() -> Self {
        Self {
            gamma_tid: 0.7,
            gamma_tnid: 0.7,
            beta_max_tid: 1.0,
            beta_max_tnid: 1.0,
            tid_rate: 2e-5,
            tnid_rate: 2e-5,
            anneal_rate_per_h: 0.5,
            tnid_components: vec!["power:0.4".into(), "communication:0.4".into(), "payload:0.2".into()],
            anneal_offline: false,
            initial_min: 0.0,
            initial_max: 0.6,
        }
    }
}

impl DamageParams {
    pub fn validate(&self) -> Result<()> {
        for (k, g) in [("gamma_tid", self.gamma_tid), ("gamma_tnid", self.gamma_tnid)] {
            if !(g > 0.0 && g < 1.0) {
                return Err(Error::config(format!("damage.{k}"), "must lie strictly inside (0, 1)"));
            }
        }
        let nonneg = [
            ("beta_max_tid", self.beta_max_tid),
            ("beta_max_tnid", self.beta_max_tnid),
            ("tid_rate", self.tid_rate),
            ("tnid_rate", self.tnid_rate),
            ("anneal_rate_per_h", self.anneal_rate_per_h),
        ];
        for (k, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(format!("damage.{k}"), "must be finite and nonnegative"));
            }
        }
        if !(0.0..=1.0).contains(&self.initial_min)
            || !(0.0..=1.0).contains(&self.initial_max)
            || self.initial_min > self.initial_max
        {
            return Err(Error::config(
                "damage.initial_max",
                "need 0 <= initial_min <= initial_max <= 1",
            ));
        }
        self.components()?;
        Ok(())
    }

    /// Parses `tnid_components` into zero-damage components.
    pub fn components(&self) -> Result<Vec<TnidComponent>> {
        let mut out = Vec::new();
        for entry in &self.tnid_components {
            let (name, w) = entry
                .split_once(':')
                .ok_or_else(|| Error::config("damage.tnid_components", format!("`{entry}` is not name:weight")))?;
            let weight: f64 = w
                .trim()
                .parse()
                .map_err(|_| Error::config("damage.tnid_components", format!("bad weight in `{entry}`")))?;
            out.push(TnidComponent::new(name.trim(), 0.0, weight));
        }
        // surface zero/negative weights as a config problem
        DamageState::new(0.0, out.clone()).map_err(|e| Error::config("damage.tnid_components", e.to_string()))?;
        Ok(out)
    }
}

/// Normalized weighted TNID aggregate.
pub fn aggregate_tnid(components: &[TnidComponent]) -> Result<f64> {
    let total: f64 = components.iter().map(|c| c.weight).sum();
    if components.is_empty() || components.iter().any(|c| !(c.weight >= 0.0)) || !(total > 0.0) {
        return Err(Error::DegenerateWeights);
    }
    Ok(components.iter().map(|c| c.weight / total * c.local).sum())
}

pub fn accumulate(state: &DamageState, intensity: f64, dt_s: f64, params: &DamageParams) -> DamageState {
    let mut next = state.clone();
    next.beta_tid = (state.beta_tid + params.tid_rate * intensity * dt_s).min(params.beta_max_tid);
    let local_cap = params.beta_max_tnid.min(1.0);
    for c in &mut next.components {
        c.local = (c.local + params.tnid_rate * intensity * dt_s).min(local_cap);
    }
    next.refresh();
    next
}

/// `(tid_due, tnid_due)`: β ≥ γ·β_max, boundary inclusive.
pub fn needs_annealing(state: &DamageState, params: &DamageParams) -> (bool, bool) {
    (
        state.beta_tid >= params.gamma_tid * params.beta_max_tid,
        state.beta_tnid >= params.gamma_tnid * params.beta_max_tnid,
    )
}

pub fn apply_annealing(state: &DamageState, duration_s: f64, params: &DamageParams) -> DamageState {
    let repaired = params.anneal_rate_per_h * duration_s / 3600.0;
    let mut next = state.clone();
    next.beta_tid = (state.beta_tid - repaired).max(0.0);
    for c in &mut next.components {
        c.local = (c.local - repaired).max(0.0);
    }
    next.refresh();
    next
}
