//! Interval-driven simulation loop.
//!
//! Each [`Simulation::step`] runs, in order: propagate, read intensity,
//! accumulate damage, sample SEE sleeps, resolve annealing and energy
//! feasibility, reroute, charge energy, update batteries and shutdowns, and
//! record telemetry and metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::constellation::{
    build_constellation, in_eclipse, isl_topology, propagate, sun_direction_at, ConstellationSpec, GroundSite,
    OrbitalSlot, Position, SatelliteId,
};
use crate::damage::{accumulate, apply_annealing, needs_annealing, DamageState};
use crate::error::{Error, Result};
use crate::power::{
    annealing_energy, drag_energy, harvest_energy, recovery_energy, step_battery, transmission_energy, BatteryState,
};
use crate::radiation::{density, load_series, sample_see_events, sleep_probability, synth_series, RadiationSeries};
use crate::routing::{
    battery_cost, build_graph, path_latency, reroute, FlowDemand, NetworkSnapshot, Policy, RerouteContext,
    RerouteReason, Route,
};
use crate::traffic::{diurnal_factor, generate_cells, pair_destinations, UserCell};

const STREAM_RADIATION: u64 = 1;
const STREAM_CELLS: u64 = 2;
const STREAM_PAIRING: u64 = 3;
const STREAM_SEE: u64 = 4;
const STREAM_INITIAL: u64 = 5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Active,
    Annealing,
    Sleep,
    Shutdown,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Active => "active",
            Mode::Annealing => "annealing",
            Mode::Sleep => "sleep",
            Mode::Shutdown => "shutdown",
        }
    }

    pub fn is_awake(self) -> bool {
        matches!(self, Mode::Active | Mode::Annealing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteRuntime {
    pub id: SatelliteId,
    pub battery: BatteryState,
    pub damage: DamageState,
    pub mode: Mode,
    pub sleep_remaining: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteTelemetry {
    pub id: SatelliteId,
    pub dod: f64,
    pub beta_tid: f64,
    pub beta_tnid: f64,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTelemetry {
    pub id: usize,
    pub path: Vec<usize>,
    pub offloaded: bool,
    pub latency_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelemetrySnapshot {
    pub t: f64,
    pub satellites: Vec<SatelliteTelemetry>,
    pub flows: Vec<FlowTelemetry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalMetrics {
    pub t: f64,
    /// Mean realized DoD change (after harvest and clamping) over
    /// satellites alive at the start of the interval.
    pub mean_ddod: f64,
    pub max_ddod: f64,
    /// Mean consumed energy / capacity over the same satellites.
    pub mean_consumption: f64,
    pub latencies_s: Vec<f64>,
    /// Flows moved because a satellite on their path slept or shut down.
    pub reroutes: usize,
    /// Flows moved because a ground link on their path dropped out of view.
    pub handovers: usize,
    /// Satellites that entered sleep this interval.
    pub sleeps: usize,
    pub shutdowns_cum: usize,
    pub drops: usize,
}

impl IntervalMetrics {
    pub fn mean_latency(&self) -> f64 {
        mean(&self.latencies_s)
    }

    pub fn p95_latency(&self) -> f64 {
        percentile(&self.latencies_s, 0.95)
    }
}

/// Energy flows charged to one satellite in one interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyEntry {
    pub dod_before: f64,
    pub dod_after: f64,
    pub drag_wh: f64,
    pub anneal_wh: f64,
    pub tx_wh: f64,
    pub harvest_wh: f64,
    pub capacity_wh: f64,
}

impl EnergyEntry {
    pub fn consumed_wh(&self) -> f64 {
        self.drag_wh + self.anneal_wh + self.tx_wh
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub policy: Policy,
    pub seed: u64,
    pub radiation_level: String,
    pub intervals: usize,
    pub satellites: usize,
    pub flows: usize,
    pub mean_ddod: f64,
    pub max_ddod: f64,
    pub mean_consumption: f64,
    pub latency_mean_s: f64,
    pub latency_p50_s: f64,
    pub latency_p95_s: f64,
    pub total_shutdowns: usize,
    pub total_reroutes: usize,
    pub total_handovers: usize,
    pub total_sleeps: usize,
    pub total_drops: usize,
    /// Drag plus annealing energy per satellite over the run.
    pub mean_recovery_wh: f64,
    pub final_mean_dod: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub summary: RunSummary,
    pub metrics: Vec<IntervalMetrics>,
    pub telemetry: Vec<TelemetrySnapshot>,
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Largest element, 0 for an empty slice.
pub fn max_or_zero(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().reduce(f64::max).unwrap_or(0.0)
}

/// Linear-interpolated percentile, `q` in [0, 1].
pub fn percentile(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

/// The synthetic series a run with `config` uses when no file is given.
pub fn synthesize_series(config: &ScenarioConfig) -> Result<RadiationSeries> {
    synth_series(
        config.radiation.level,
        config.horizon_s,
        config.interval_s,
        config.radiation.jitter,
        &mut stream(config.seed, STREAM_RADIATION),
    )
}

/// A scenario in progress.
pub struct Simulation {
    config: ScenarioConfig,
    spec: ConstellationSpec,
    slots: Vec<OrbitalSlot>,
    isl: Vec<(usize, usize)>,
    /// User cells first, then ground stations.
    sites: Vec<GroundSite>,
    stations: Vec<usize>,
    cells: Vec<UserCell>,
    pairing: Vec<usize>,
    routes: Vec<Route>,
    sats: Vec<SatelliteRuntime>,
    series: RadiationSeries,
    see_rng: ChaCha8Rng,
    step_index: usize,
    n_steps: usize,
    shutdowns: usize,
    recovery_wh: f64,
    last_ledger: Vec<EnergyEntry>,
    record_telemetry: bool,
    metrics: Vec<IntervalMetrics>,
    telemetry: Vec<TelemetrySnapshot>,
}

impl Simulation {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let series = match &config.radiation.file {
            Some(path) => load_series(path, config.radiation.bounds()?)?,
            None => synthesize_series(config)?,
        };
        Self::with_series(config, series)
    }

    /// Uses an explicit radiation series instead of the configured source.
    pub fn with_series(config: &ScenarioConfig, series: RadiationSeries) -> Result<Self> {
        config.validate()?;
        if series.samples()[0].t > 0.0 {
            return Err(Error::config("radiation", "series must start at or before t = 0"));
        }
        let spec = config.constellation.spec();
        let slots = build_constellation(&spec)?;
        let isl = isl_topology(&spec);

        let n_cells = config.traffic.n_cells;
        let (cells, pairing) = if n_cells >= 2 {
            let dist = config.traffic.load_distribution()?;
            let cells = generate_cells(
                n_cells,
                &dist,
                config.traffic.base_rate_mbps,
                &mut stream(config.seed, STREAM_CELLS),
            )?;
            let pairing = pair_destinations(n_cells, &mut stream(config.seed, STREAM_PAIRING))?;
            (cells, pairing)
        } else {
            (Vec::new(), Vec::new())
        };
        let mut sites: Vec<GroundSite> = cells.iter().map(|c| c.site).collect();
        let stations: Vec<usize> = if config.policy == Policy::Umbra || n_cells >= 2 {
            let list = config.traffic.load_stations()?;
            let first = sites.len();
            sites.extend(list);
            (first..sites.len()).collect()
        } else {
            Vec::new()
        };

        let mut init = stream(config.seed, STREAM_INITIAL);
        let components = config.damage.components()?;
        let d = &config.damage;
        let b = &config.battery;
        let uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        let sats = slots
            .iter()
            .map(|slot| {
                let dod = uniform(&mut init, b.initial_dod_min, b.initial_dod_max);
                let tid = uniform(&mut init, d.initial_min, d.initial_max) * d.beta_max_tid;
                let local_cap = d.beta_max_tnid.min(1.0);
                let comps = components
                    .iter()
                    .map(|c| {
                        let mut c = c.clone();
                        c.local = uniform(&mut init, d.initial_min, d.initial_max) * local_cap;
                        c
                    })
                    .collect();
                Ok(SatelliteRuntime {
                    id: slot.id,
                    battery: BatteryState::new(b.capacity_wh, dod),
                    damage: DamageState::new(tid.min(d.beta_max_tid), comps)?,
                    mode: Mode::Active,
                    sleep_remaining: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            n_steps: config.n_steps(),
            config: config.clone(),
            spec,
            routes: vec![Route::default(); cells.len()],
            slots,
            isl,
            sites,
            stations,
            cells,
            pairing,
            sats,
            series,
            see_rng: stream(config.seed, STREAM_SEE),
            step_index: 0,
            shutdowns: 0,
            recovery_wh: 0.0,
            last_ledger: Vec::new(),
            record_telemetry: true,
            metrics: Vec::new(),
            telemetry: Vec::new(),
        })
    }

    /// Disables per-satellite snapshots (metrics are still recorded).
    pub fn set_record_telemetry(&mut self, on: bool) {
        self.record_telemetry = on;
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn spec(&self) -> &ConstellationSpec {
        &self.spec
    }

    pub fn satellites(&self) -> &[SatelliteRuntime] {
        &self.sats
    }

    pub fn satellites_mut(&mut self) -> &mut [SatelliteRuntime] {
        &mut self.sats
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn sites(&self) -> &[GroundSite] {
        &self.sites
    }

    pub fn cells(&self) -> &[UserCell] {
        &self.cells
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn series(&self) -> &RadiationSeries {
        &self.series
    }

    pub fn metrics(&self) -> &[IntervalMetrics] {
        &self.metrics
    }

    pub fn telemetry(&self) -> &[TelemetrySnapshot] {
        &self.telemetry
    }

    pub fn last_ledger(&self) -> &[EnergyEntry] {
        &self.last_ledger
    }

    pub fn recovery_wh_total(&self) -> f64 {
        self.recovery_wh
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn is_done(&self) -> bool {
        self.step_index >= self.n_steps
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.config.interval_s
    }

    fn sat_positions(&self, t: f64) -> Vec<Position> {
        self.slots.iter().map(|s| propagate(s, &self.spec, t)).collect()
    }

    /// Recovery energy over `duration_s`: drag, plus annealing while the
    /// damage state is at or above a trigger threshold.
    fn recovery_over(&self, damage: &DamageState, intensity: f64, duration_s: f64) -> f64 {
        recovery_energy(
            damage,
            intensity,
            self.spec.altitude_km,
            duration_s,
            &self.config.energy,
            &self.config.radiation.model(),
            &self.config.damage,
        )
    }

    /// Advances one interval. Returns `None` once the horizon is reached.
    pub fn step(&mut self) -> Option<&IntervalMetrics> {
        if self.is_done() {
            return None;
        }
        let cfg = self.config.clone();
        let dt = cfg.interval_s;
        let t = self.time();
        let policy = cfg.policy;
        let capacity = cfg.battery.capacity_wh;
        let shutdown_dod = cfg.battery.shutdown_dod;
        let n_sats = self.sats.len();

        // 1. positions
        let positions = self.sat_positions(t);
        let sun = sun_direction_at(cfg.constellation.sun_direction, cfg.constellation.sun_rotates, t);

        // 2. intensity (validated to start at t <= 0, so lookup cannot fail)
        let intensity = self.series.intensity_at(t).expect("series starts at or before t = 0");

        // 3. damage
        for sat in self.sats.iter_mut().filter(|s| s.mode != Mode::Shutdown) {
            sat.damage = accumulate(&sat.damage, intensity, dt, &cfg.damage);
        }

        // 4. wake-ups, then SEE sampling over every satellite in (plane, slot) order
        for sat in &mut self.sats {
            if sat.mode == Mode::Sleep && sat.sleep_remaining == 0 {
                sat.mode = Mode::Active;
            }
        }
        let mut sleeps = 0;
        let all: Vec<usize> = (0..n_sats).collect();
        let p_sleep = sleep_probability(intensity, &cfg.radiation.model());
        let hits = sample_see_events(&all, p_sleep, &mut self.see_rng);
        let mut see = vec![false; n_sats];
        for i in hits {
            if self.sats[i].mode.is_awake() {
                see[i] = true;
            }
        }

        // 5. mode transitions
        let lookahead = cfg.engine.feasibility_lookahead_intervals as f64 * dt;
        for i in 0..n_sats {
            let sat = &self.sats[i];
            if !sat.mode.is_awake() {
                continue;
            }
            let next = if see[i] {
                Mode::Sleep
            } else {
                let (tid_due, tnid_due) = needs_annealing(&sat.damage, &cfg.damage);
                let in_progress = sat.mode == Mode::Annealing && !sat.damage.is_clear();
                let wants_anneal = tid_due || tnid_due || in_progress;
                let infeasible = policy.recovery_aware()
                    && sat.battery.dod + self.recovery_over(&sat.damage, intensity, lookahead) / capacity
                        > shutdown_dod;
                if infeasible {
                    Mode::Sleep
                } else if wants_anneal {
                    Mode::Annealing
                } else {
                    Mode::Active
                }
            };
            let sat = &mut self.sats[i];
            if next == Mode::Sleep {
                sleeps += 1;
                sat.sleep_remaining = cfg.engine.sleep_intervals;
            }
            sat.mode = next;
        }

        // 6. routing
        let available: Vec<bool> = self
            .sats
            .iter()
            .map(|s| s.mode == Mode::Active || (s.mode == Mode::Annealing && !cfg.damage.anneal_offline))
            .collect();
        let shutdown: Vec<bool> = self.sats.iter().map(|s| s.mode == Mode::Shutdown).collect();
        let sat_cost: Vec<f64> = self
            .sats
            .iter()
            .map(|s| {
                let rec = self.recovery_over(&s.damage, intensity, dt);
                battery_cost(policy, cfg.traffic.base_rate_mbps, dt, rec, &cfg.energy, capacity)
            })
            .collect();
        let snapshot = NetworkSnapshot {
            sat_positions: &positions,
            sat_available: &available,
            sat_cost: &sat_cost,
            isl: &self.isl,
            sites: &self.sites,
            min_elevation_deg: cfg.constellation.min_elevation_deg,
            alpha: cfg.routing.alpha,
            t,
        };
        let node_positions = snapshot.node_positions();
        let mut reroutes = 0;
        let mut handovers = 0;
        if !self.cells.is_empty() {
            let graph = build_graph(&snapshot);
            let demands: Vec<FlowDemand<'_>> = (0..self.cells.len())
                .map(|i| FlowDemand {
                    id: i,
                    src_site: i,
                    dst_site: self.pairing[i],
                    route: &self.routes[i],
                })
                .collect();
            let ctx = RerouteContext {
                graph: &graph,
                sites: &self.sites,
                n_sats,
                shutdown: &shutdown,
                stations: &self.stations,
            };
            let plans = reroute(policy, &demands, &ctx);
            drop(demands);
            for plan in plans {
                if plan.reason.is_radiation() {
                    reroutes += 1;
                } else if plan.reason == RerouteReason::Handover {
                    handovers += 1;
                }
                self.routes[plan.flow_id] = plan.new;
            }
            debug_assert!(self
                .routes
                .iter()
                .all(|r| r.nodes.iter().all(|&n| n >= n_sats || available[n])));
        }

        // 7. energy
        let rates: Vec<f64> = self
            .cells
            .iter()
            .map(|c| c.base_rate_mbps * diurnal_factor(c.site.longitude_deg, t, &cfg.traffic.diurnal()))
            .collect();
        let mut tx = vec![0.0; n_sats];
        let mut latencies = Vec::new();
        let mut drops = 0;
        for (route, &rate) in self.routes.iter().zip(&rates) {
            if !route.is_routed() {
                drops += 1;
                continue;
            }
            let e = transmission_energy(rate, dt, &cfg.energy);
            for &n in &route.nodes {
                if n < n_sats {
                    tx[n] += e;
                }
            }
            latencies.push(path_latency(route, &node_positions));
        }
        let drag = drag_energy(
            density(intensity, &cfg.radiation.model()),
            self.spec.altitude_km,
            dt,
            &cfg.energy,
        );
        let mut ledger = Vec::with_capacity(n_sats);
        let mut ddod = Vec::with_capacity(n_sats);
        let mut consumption = Vec::with_capacity(n_sats);
        for (i, sat) in self.sats.iter_mut().enumerate() {
            let dod_before = sat.battery.dod;
            if sat.mode == Mode::Shutdown {
                ledger.push(EnergyEntry {
                    dod_before,
                    dod_after: dod_before,
                    drag_wh: 0.0,
                    anneal_wh: 0.0,
                    tx_wh: 0.0,
                    harvest_wh: 0.0,
                    capacity_wh: capacity,
                });
                continue;
            }
            let anneal = if sat.mode == Mode::Annealing {
                sat.damage = apply_annealing(&sat.damage, dt, &cfg.damage);
                annealing_energy(dt, &cfg.energy)
            } else {
                0.0
            };
            let harvest = harvest_energy(!in_eclipse(&positions[i], sun), dt, &cfg.energy);
            let consumed = drag + anneal + tx[i];
            self.recovery_wh += drag + anneal;

            // 8. battery and shutdown
            let stepped = step_battery(sat.battery, consumed, harvest);
            sat.battery = stepped.state;
            if sat.battery.dod > shutdown_dod {
                sat.mode = Mode::Shutdown;
                sat.sleep_remaining = 0;
                self.shutdowns += 1;
            }
            ddod.push(sat.battery.dod - dod_before);
            consumption.push(consumed / capacity);
            ledger.push(EnergyEntry {
                dod_before,
                dod_after: sat.battery.dod,
                drag_wh: drag,
                anneal_wh: anneal,
                tx_wh: tx[i],
                harvest_wh: harvest,
                capacity_wh: capacity,
            });
        }
        for sat in &mut self.sats {
            if sat.mode == Mode::Sleep {
                sat.sleep_remaining = sat.sleep_remaining.saturating_sub(1);
            }
        }
        self.last_ledger = ledger;

        // 9. telemetry and metrics
        if self.record_telemetry {
            self.telemetry.push(TelemetrySnapshot {
                t,
                satellites: self
                    .sats
                    .iter()
                    .map(|s| SatelliteTelemetry {
                        id: s.id,
                        dod: s.battery.dod,
                        beta_tid: s.damage.beta_tid(),
                        beta_tnid: s.damage.beta_tnid(),
                        mode: s.mode,
                    })
                    .collect(),
                flows: self
                    .routes
                    .iter()
                    .enumerate()
                    .map(|(id, r)| FlowTelemetry {
                        id,
                        path: r.nodes.clone(),
                        offloaded: r.is_offloaded(),
                        latency_s: r.is_routed().then(|| path_latency(r, &node_positions)),
                    })
                    .collect(),
            });
        }
        self.metrics.push(IntervalMetrics {
            t,
            mean_ddod: mean(&ddod),
            max_ddod: max_or_zero(ddod.iter().copied()),
            mean_consumption: mean(&consumption),
            latencies_s: latencies,
            reroutes,
            handovers,
            sleeps,
            shutdowns_cum: self.shutdowns,
            drops,
        });
        self.step_index += 1;
        self.metrics.last()
    }

    pub fn summary(&self) -> RunSummary {
        let all_lat: Vec<f64> = self
            .metrics
            .iter()
            .flat_map(|m| m.latencies_s.iter().copied())
            .collect();
        let ddods: Vec<f64> = self.metrics.iter().map(|m| m.mean_ddod).collect();
        let n = self.sats.len().max(1) as f64;
        RunSummary {
            policy: self.config.policy,
            seed: self.config.seed,
            radiation_level: match &self.config.radiation.file {
                Some(_) => "custom".into(),
                None => self.config.radiation.level.as_str().into(),
            },
            intervals: self.metrics.len(),
            satellites: self.sats.len(),
            flows: self.cells.len(),
            mean_ddod: mean(&ddods),
            max_ddod: max_or_zero(self.metrics.iter().map(|m| m.max_ddod)),
            mean_consumption: mean(&self.metrics.iter().map(|m| m.mean_consumption).collect::<Vec<_>>()),
            latency_mean_s: mean(&all_lat),
            latency_p50_s: percentile(&all_lat, 0.5),
            latency_p95_s: percentile(&all_lat, 0.95),
            total_shutdowns: self.shutdowns,
            total_reroutes: self.metrics.iter().map(|m| m.reroutes).sum(),
            total_handovers: self.metrics.iter().map(|m| m.handovers).sum(),
            total_sleeps: self.metrics.iter().map(|m| m.sleeps).sum(),
            total_drops: self.metrics.iter().map(|m| m.drops).sum(),
            mean_recovery_wh: self.recovery_wh / n,
            final_mean_dod: self.sats.iter().map(|s| s.battery.dod).sum::<f64>() / n,
        }
    }

    pub fn run_to_end(&mut self) {
        while self.step().is_some() {}
    }

    pub fn into_report(self) -> RunReport {
        RunReport {
            summary: self.summary(),
            metrics: self.metrics,
            telemetry: self.telemetry,
        }
    }
}

/// Runs a scenario to its horizon.
pub fn run(config: &ScenarioConfig) -> Result<RunReport> {
    run_with(config, true)
}

pub fn run_with(config: &ScenarioConfig, record_telemetry: bool) -> Result<RunReport> {
    let mut sim = Simulation::new(config)?;
    sim.set_record_telemetry(record_telemetry);
    sim.run_to_end();
    Ok(sim.into_report())
}

/// Percentage by which `value` improves on `baseline` (positive = lower).
pub fn reduction_pct(value: f64, baseline: f64) -> f64 {
    if baseline == 0.0 {
        if value == 0.0 {
            0.0
        } else {
            f64::NAN
        }
    } else {
        (baseline - value) / baseline * 100.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseDelta {
    pub policy: Policy,
    pub baseline: Policy,
    pub ddod_reduction_pct: f64,
    pub latency_reduction_pct: f64,
    pub shutdown_reduction_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub summaries: Vec<RunSummary>,
    pub deltas: Vec<PairwiseDelta>,
}

/// Paired runs: every policy sees the same seed and radiation series.
pub fn compare(config: &ScenarioConfig, policies: &[Policy]) -> Result<Comparison> {
    if policies.is_empty() {
        return Err(Error::config("policies", "need at least one policy"));
    }
    let summaries = policies
        .iter()
        .map(|&p| {
            let mut c = config.clone();
            c.policy = p;
            run_with(&c, false).map(|r| r.summary)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut deltas = Vec::new();
    for a in &summaries {
        for b in &summaries {
            deltas.push(PairwiseDelta {
                policy: a.policy,
                baseline: b.policy,
                ddod_reduction_pct: reduction_pct(a.mean_ddod, b.mean_ddod),
                latency_reduction_pct: reduction_pct(a.latency_mean_s, b.latency_mean_s),
                shutdown_reduction_pct: reduction_pct(a.total_shutdowns as f64, b.total_shutdowns as f64),
            });
        }
    }
    Ok(Comparison { summaries, deltas })
}
