//! Per-interval network graph, shortest paths, and the three rerouting
//! policies.
//!
//! Node ids are dense: satellites first in (plane, slot) order, then ground
//! sites in the order the caller lists them. Battery cost is a property of
//! the node being entered, so a directed edge `u -> v` carries the cost of
//! `v` when `v` is a satellite and no battery cost when `v` is on the
//! ground. Combined weight of `u -> v`:
//!
//! ```text
//! alpha * norm(delay(u, v)) + (1 - alpha) * norm(cost(v))
//! ```
//!
//! with min-max normalization of each metric over the graph's edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constellation::{elevation_from, propagation_delay, GroundSite, Position, SPEED_OF_LIGHT_KM_S};
use crate::error::{Error, Result};
use crate::power::{transmission_energy, EnergyParams};

pub type NodeId = usize;

/// Terrestrial fiber propagation speed as a fraction of c.
pub const FIBER_FACTOR: f64 = 0.67;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Ralt,
    Phoenix,
    Umbra,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Ralt => "ralt",
            Policy::Phoenix => "phoenix",
            Policy::Umbra => "umbra",
        }
    }

    /// Whether the policy's scheduler accounts for radiation recovery energy.
    pub fn recovery_aware(self) -> bool {
        matches!(self, Policy::Ralt)
    }
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ralt" => Ok(Policy::Ralt),
            "phoenix" => Ok(Policy::Phoenix),
            "umbra" => Ok(Policy::Umbra),
            other => Err(format!("unknown policy `{other}` (expected ralt, phoenix or umbra)")),
        }
    }
}

/// ΔDoD of carrying `rate_mbps` through a satellite for one interval.
/// Only the recovery-aware policy adds the satellite's recovery energy.
pub fn battery_cost(
    policy: Policy,
    rate_mbps: f64,
    interval_s: f64,
    recovery_wh: f64,
    energy: &EnergyParams,
    capacity_wh: f64,
) -> f64 {
    let tx = transmission_energy(rate_mbps, interval_s, energy);
    let wh = if policy.recovery_aware() { tx + recovery_wh } else { tx };
    wh / capacity_wh
}

/// Min-max normalization; a constant metric maps to all zeros.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let Some((lo, hi)) = min_max(values.iter().copied()) else {
        return Vec::new();
    };
    let span = hi - lo;
    values
        .iter()
        .map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 })
        .collect()
}

fn min_max(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Arc {
    to: NodeId,
    delay_s: f64,
    weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeight {
    pub delay_s: f64,
    pub battery_cost: f64,
    pub combined: f64,
}

/// Undirected edge with a battery cost per direction (`None`: not charged).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub delay_s: f64,
    pub cost_into_b: Option<f64>,
    pub cost_into_a: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct NetworkGraph {
    n_nodes: usize,
    transit: Vec<bool>,
    present: Vec<bool>,
    adj: Vec<Vec<Arc>>,
    edges: Vec<RawEdge>,
    alpha: f64,
}

impl NetworkGraph {
    /// Builds a graph from raw edges, normalizing both metrics over them.
    pub fn from_edges(n_nodes: usize, edges: Vec<RawEdge>, alpha: f64, transit: Vec<bool>, present: Vec<bool>) -> Self {
        let delay_range = min_max(edges.iter().map(|e| e.delay_s));
        let cost_range = min_max(edges.iter().flat_map(|e| [e.cost_into_a, e.cost_into_b]).flatten());
        let norm = |v: f64, range: Option<(f64, f64)>| match range {
            Some((lo, hi)) if hi > lo => (v - lo) / (hi - lo),
            _ => 0.0,
        };
        let mut adj = vec![Vec::new(); n_nodes];
        for e in &edges {
            let nd = norm(e.delay_s, delay_range);
            let w_ab = alpha * nd + (1.0 - alpha) * e.cost_into_b.map_or(0.0, |c| norm(c, cost_range));
            let w_ba = alpha * nd + (1.0 - alpha) * e.cost_into_a.map_or(0.0, |c| norm(c, cost_range));
            adj[e.a].push(Arc {
                to: e.b,
                delay_s: e.delay_s,
                weight: w_ab,
            });
            adj[e.b].push(Arc {
                to: e.a,
                delay_s: e.delay_s,
                weight: w_ba,
            });
        }
        for list in &mut adj {
            list.sort_by_key(|a| a.to);
        }
        Self {
            n_nodes,
            transit,
            present,
            adj,
            edges,
            alpha,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[RawEdge] {
        &self.edges
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.present.get(node).copied().unwrap_or(false)
    }

    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[node].iter().map(|a| a.to)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj
            .get(u)
            .is_some_and(|l| l.binary_search_by_key(&v, |a| a.to).is_ok())
    }

    /// Combined weight of the directed edge `u -> v`.
    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |a| a.to).ok().map(|i| list[i].weight)
    }

    pub fn delay(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |a| a.to).ok().map(|i| list[i].delay_s)
    }

    /// Every consecutive hop exists and every node is present.
    pub fn path_is_valid(&self, nodes: &[NodeId]) -> bool {
        nodes.iter().all(|&n| self.contains(n)) && nodes.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    pub fn shortest_path(&self, src: NodeId, dst: NodeId) -> Option<PathResult> {
        self.dijkstra(src, Metric::Combined).path_to(dst)
    }

    /// Single-source tree under `metric`.
    pub fn dijkstra(&self, src: NodeId, metric: Metric) -> ShortestPathTree {
        let n = self.n_nodes;
        let mut dist = vec![f64::INFINITY; n];
        let mut prev: Vec<Option<NodeId>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        if self.contains(src) {
            dist[src] = 0.0;
            heap.push(HeapEntry { cost: 0.0, node: src });
        }
        while let Some(HeapEntry { cost, node: u }) = heap.pop() {
            if done[u] || cost > dist[u] {
                continue;
            }
            done[u] = true;
            if u != src && !self.transit[u] {
                continue;
            }
            for arc in &self.adj[u] {
                let v = arc.to;
                if done[v] || !self.contains(v) {
                    continue;
                }
                let w = match metric {
                    Metric::Combined => arc.weight,
                    Metric::Delay => arc.delay_s,
                };
                let cand = cost + w;
                let better = match cand.total_cmp(&dist[v]) {
                    Ordering::Less => true,
                    Ordering::Equal => lex_less(&prev, u, v),
                    Ordering::Greater => false,
                };
                if better {
                    dist[v] = cand;
                    prev[v] = Some(u);
                    heap.push(HeapEntry { cost: cand, node: v });
                }
            }
        }
        ShortestPathTree { src, dist, prev }
    }
}

/// True when the path `src..u, v` sorts before the current path to `v`.
fn lex_less(prev: &[Option<NodeId>], u: NodeId, v: NodeId) -> bool {
    let chain = |mut n: NodeId| {
        let mut out = vec![n];
        while let Some(p) = prev[n] {
            out.push(p);
            n = p;
        }
        out.reverse();
        out
    };
    let Some(cur) = prev[v] else { return false };
    let mut cand = chain(u);
    cand.push(v);
    let mut existing = chain(cur);
    existing.push(v);
    cand < existing
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Combined,
    Delay,
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    cost: f64,
    node: NodeId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    src: NodeId,
    dist: Vec<f64>,
    prev: Vec<Option<NodeId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    /// Node sequence from source to destination; empty when they coincide.
    pub nodes: Vec<NodeId>,
    pub cost: f64,
}

impl ShortestPathTree {
    pub fn distance(&self, node: NodeId) -> f64 {
        self.dist[node]
    }

    pub fn path_to(&self, dst: NodeId) -> Option<PathResult> {
        if dst == self.src {
            return self.dist[dst].is_finite().then(|| PathResult {
                nodes: Vec::new(),
                cost: 0.0,
            });
        }
        if !self.dist[dst].is_finite() {
            return None;
        }
        let mut nodes = vec![dst];
        let mut n = dst;
        while let Some(p) = self.prev[n] {
            nodes.push(p);
            n = p;
        }
        nodes.reverse();
        Some(PathResult {
            nodes,
            cost: self.dist[dst],
        })
    }
}

/// Parses the `u v delay_s ddod` fixture format. Node names are assigned
/// ids in sorted order; all nodes may relay traffic.
pub fn parse_edge_list(text: &str, alpha: f64) -> Result<(NetworkGraph, BTreeMap<String, NodeId>)> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: &str| Error::Parse {
            path: "<edge list>".into(),
            line: i + 1,
            msg: msg.to_string(),
        };
        if parts.len() != 4 {
            return Err(err("expected `u v delay_s ddod`"));
        }
        let delay: f64 = parts[2].parse().map_err(|_| err("bad delay"))?;
        let ddod: f64 = parts[3].parse().map_err(|_| err("bad ddod"))?;
        if !(delay >= 0.0) || !(ddod >= 0.0) {
            return Err(err("weights must be nonnegative"));
        }
        rows.push((parts[0].to_string(), parts[1].to_string(), delay, ddod));
    }
    let mut names = BTreeMap::new();
    for (u, v, _, _) in &rows {
        names.entry(u.clone()).or_insert(0);
        names.entry(v.clone()).or_insert(0);
    }
    for (i, id) in names.values_mut().enumerate() {
        *id = i;
    }
    let edges = rows
        .iter()
        .map(|(u, v, d, c)| RawEdge {
            a: names[u],
            b: names[v],
            delay_s: *d,
            cost_into_b: Some(*c),
            cost_into_a: Some(*c),
        })
        .collect();
    let n = names.len();
    Ok((
        NetworkGraph::from_edges(n, edges, alpha, vec![true; n], vec![true; n]),
        names,
    ))
}

pub fn load_edge_list(path: &Path, alpha: f64) -> Result<(NetworkGraph, BTreeMap<String, NodeId>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, alpha)
}

/// Snapshot of everything needed to build the routing graph at one epoch.
#[derive(Debug, Clone)]
pub struct NetworkSnapshot<'a> {
    pub sat_positions: &'a [Position],
    /// Satellite may carry traffic this interval.
    pub sat_available: &'a [bool],
    /// Battery cost (ΔDoD) of routing through each satellite.
    pub sat_cost: &'a [f64],
    pub isl: &'a [(usize, usize)],
    pub sites: &'a [GroundSite],
    pub min_elevation_deg: f64,
    pub alpha: f64,
    pub t: f64,
}

impl NetworkSnapshot<'_> {
    pub fn site_node(&self, site: usize) -> NodeId {
        self.sat_positions.len() + site
    }

    /// Inertial positions for every node at `t`.
    pub fn node_positions(&self) -> Vec<Position> {
        self.sat_positions
            .iter()
            .copied()
            .chain(self.sites.iter().map(|s| s.position(self.t)))
            .collect()
    }
}

pub fn build_graph(snap: &NetworkSnapshot<'_>) -> NetworkGraph {
    let n_sats = snap.sat_positions.len();
    let n = n_sats + snap.sites.len();
    let site_pos: Vec<Position> = snap.sites.iter().map(|s| s.position(snap.t)).collect();
    let mut edges = Vec::new();
    for &(a, b) in snap.isl {
        if snap.sat_available[a] && snap.sat_available[b] {
            edges.push(RawEdge {
                a,
                b,
                delay_s: propagation_delay(&snap.sat_positions[a], &snap.sat_positions[b]),
                cost_into_b: Some(snap.sat_cost[b]),
                cost_into_a: Some(snap.sat_cost[a]),
            });
        }
    }
    for k in 0..snap.sites.len() {
        for s in 0..n_sats {
            if snap.sat_available[s] && elevation_from(&snap.sat_positions[s], &site_pos[k]) >= snap.min_elevation_deg {
                edges.push(RawEdge {
                    a: n_sats + k,
                    b: s,
                    delay_s: propagation_delay(&site_pos[k], &snap.sat_positions[s]),
                    cost_into_b: Some(snap.sat_cost[s]),
                    cost_into_a: None,
                });
            }
        }
    }
    let mut transit = vec![true; n];
    let mut present = vec![true; n];
    present[..n_sats].copy_from_slice(&snap.sat_available[..n_sats]);
    for t in transit.iter_mut().skip(n_sats) {
        *t = false;
    }
    NetworkGraph::from_edges(n, edges, snap.alpha, transit, present)
}

/// A routed path plus an optional terrestrial leg from its last node.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<NodeId>,
    pub terrestrial_km: Option<f64>,
}

impl Route {
    pub fn is_routed(&self) -> bool {
        !self.nodes.is_empty()
    }

    pub fn is_offloaded(&self) -> bool {
        self.terrestrial_km.is_some()
    }
}

pub fn terrestrial_delay(km: f64) -> f64 {
    km / (FIBER_FACTOR * SPEED_OF_LIGHT_KM_S)
}

/// Propagation delay over every hop plus any terrestrial leg.
pub fn path_latency(route: &Route, positions: &[Position]) -> f64 {
    let air: f64 = route
        .nodes
        .windows(2)
        .map(|w| propagation_delay(&positions[w[0]], &positions[w[1]]))
        .sum();
    air + route.terrestrial_km.map_or(0.0, terrestrial_delay)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RerouteReason {
    Initial,
    SleepOnPath,
    ShutdownOnPath,
    /// A ground link on the path went out of view.
    Handover,
}

impl RerouteReason {
    /// Interruptions caused by radiation (as opposed to orbital motion).
    pub fn is_radiation(self) -> bool {
        matches!(self, RerouteReason::SleepOnPath | RerouteReason::ShutdownOnPath)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReroutePlan {
    pub flow_id: usize,
    pub old: Route,
    pub new: Route,
    pub reason: RerouteReason,
}

/// Demand as seen by the router: endpoints are ground-site indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowDemand<'a> {
    pub id: usize,
    pub src_site: usize,
    pub dst_site: usize,
    pub route: &'a Route,
}

/// Why (if at all) an existing route needs replacing.
pub fn reroute_trigger(route: &Route, graph: &NetworkGraph, shutdown: &[bool]) -> Option<RerouteReason> {
    if !route.is_routed() {
        return Some(RerouteReason::Initial);
    }
    let n_sats = shutdown.len();
    let mut missing_sat = None;
    for &n in &route.nodes {
        if n < n_sats && !graph.contains(n) {
            if shutdown[n] {
                return Some(RerouteReason::ShutdownOnPath);
            }
            missing_sat = Some(n);
        }
    }
    if missing_sat.is_some() {
        return Some(RerouteReason::SleepOnPath);
    }
    if !graph.path_is_valid(&route.nodes) {
        return Some(RerouteReason::Handover);
    }
    None
}

/// Inputs shared by the policy reroute operations.
pub struct RerouteContext<'a> {
    pub graph: &'a NetworkGraph,
    pub sites: &'a [GroundSite],
    pub n_sats: usize,
    /// Satellites permanently shut down.
    pub shutdown: &'a [bool],
    /// Site indices usable as offload ground stations.
    pub stations: &'a [usize],
}

impl RerouteContext<'_> {
    fn site_node(&self, site: usize) -> NodeId {
        self.n_sats + site
    }

    fn route_over_network(&self, flow: &FlowDemand<'_>) -> Route {
        let (s, d) = (self.site_node(flow.src_site), self.site_node(flow.dst_site));
        match self.graph.shortest_path(s, d) {
            Some(p) if !p.nodes.is_empty() => Route {
                nodes: p.nodes,
                terrestrial_km: None,
            },
            _ => Route::default(),
        }
    }

    /// Delay-optimal satellite segment to a ground station plus fiber leg.
    fn route_via_ground(&self, flow: &FlowDemand<'_>) -> Route {
        let src = self.site_node(flow.src_site);
        let tree = self.graph.dijkstra(src, Metric::Delay);
        let dst_site = &self.sites[flow.dst_site];
        let mut best: Option<(f64, usize, f64)> = None;
        for &gs in self.stations {
            let node = self.site_node(gs);
            let seg = tree.distance(node);
            if !seg.is_finite() || node == src {
                continue;
            }
            let leg_km = self.sites[gs].great_circle_km(dst_site);
            let total = seg + terrestrial_delay(leg_km);
            if best.is_none_or(|(b, _, _)| total < b) {
                best = Some((total, gs, leg_km));
            }
        }
        match best.and_then(|(_, gs, km)| tree.path_to(self.site_node(gs)).map(|p| (p, km))) {
            Some((p, km)) => Route {
                nodes: p.nodes,
                terrestrial_km: Some(km),
            },
            None => Route::default(),
        }
    }
}

fn reroute_with<F>(flows: &[FlowDemand<'_>], ctx: &RerouteContext<'_>, mut pick: F) -> Vec<ReroutePlan>
where
    F: FnMut(&FlowDemand<'_>, RerouteReason) -> Route,
{
    let mut plans = Vec::new();
    for flow in flows {
        let Some(reason) = reroute_trigger(flow.route, ctx.graph, ctx.shutdown) else {
            continue;
        };
        let new = pick(flow, reason);
        if &new != flow.route {
            plans.push(ReroutePlan {
                flow_id: flow.id,
                old: flow.route.clone(),
                new,
                reason,
            });
        }
    }
    plans
}

/// Recovery-aware rerouting; `ctx.graph` must carry RALT battery costs.
pub fn ralt_reroute(flows: &[FlowDemand<'_>], ctx: &RerouteContext<'_>) -> Vec<ReroutePlan> {
    reroute_with(flows, ctx, |f, _| ctx.route_over_network(f))
}

/// Same triggers as RALT over a graph weighted without recovery energy.
pub fn phoenix_reroute(flows: &[FlowDemand<'_>], ctx: &RerouteContext<'_>) -> Vec<ReroutePlan> {
    reroute_with(flows, ctx, |f, _| ctx.route_over_network(f))
}

/// Flows interrupted by radiation, and flows already offloaded, go down to
/// the best ground station and cross a fiber leg; others route normally.
pub fn umbra_offload(flows: &[FlowDemand<'_>], ctx: &RerouteContext<'_>) -> Vec<ReroutePlan> {
    reroute_with(flows, ctx, |f, reason| {
        if reason.is_radiation() || f.route.is_offloaded() {
            ctx.route_via_ground(f)
        } else {
            ctx.route_over_network(f)
        }
    })
}

pub fn reroute(policy: Policy, flows: &[FlowDemand<'_>], ctx: &RerouteContext<'_>) -> Vec<ReroutePlan> {
    match policy {
        Policy::Ralt => ralt_reroute(flows, ctx),
        Policy::Phoenix => phoenix_reroute(flows, ctx),
        Policy::Umbra => umbra_offload(flows, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_cases() {
        assert_eq!(normalize(&[2.0, 2.0, 2.0]), vec![0.0, 0.0, 0.0]);
        assert_eq!(normalize(&[1.0, 3.0]), vec![0.0, 1.0]);
        assert_eq!(normalize(&[1.0, 2.0, 3.0]), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn same_node_is_empty_path() {
        let (g, ids) = parse_edge_list("a b 1 0\n", 1.0).unwrap();
        let p = g.shortest_path(ids["a"], ids["a"]).unwrap();
        assert!(p.nodes.is_empty());
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn triangle() {
        // delays 1,1,3 normalize to 0,0,1 with alpha = 1; raw-delay metric checks hand value
        let (g, ids) = parse_edge_list("a b 1 0\nb c 1 0\na c 3 0\n", 1.0).unwrap();
        let tree = g.dijkstra(ids["a"], Metric::Delay);
        let p = tree.path_to(ids["c"]).unwrap();
        assert_eq!(p.nodes, vec![ids["a"], ids["b"], ids["c"]]);
        assert_eq!(p.cost, 2.0);
        let p = g.shortest_path(ids["a"], ids["c"]).unwrap();
        assert_eq!(p.nodes, vec![ids["a"], ids["b"], ids["c"]]);
    }

    #[test]
    fn unreachable_is_none() {
        let (g, ids) = parse_edge_list("a b 1 0\nc d 1 0\n", 0.5).unwrap();
        assert!(g.shortest_path(ids["a"], ids["d"]).is_none());
    }

    #[test]
    fn lexicographic_tie_break() {
        let (g, ids) = parse_edge_list("s b 1 0\nb t 1 0\ns a 1 0\na t 1 0\n", 1.0).unwrap();
        let p = g.dijkstra(ids["s"], Metric::Delay).path_to(ids["t"]).unwrap();
        assert_eq!(p.nodes, vec![ids["s"], ids["a"], ids["t"]]);
    }

    #[test]
    fn battery_cost_cases() {
        let e = EnergyParams::default();
        assert_eq!(battery_cost(Policy::Ralt, 0.0, 60.0, 0.0, &e, 5000.0), 0.0);
        let c = battery_cost(Policy::Ralt, 300.0, 60.0, 0.0, &e, 5000.0);
        assert!((c - 4.8e-3).abs() < 1e-15);
        let ralt = battery_cost(Policy::Ralt, 300.0, 60.0, 40.0, &e, 5000.0);
        let phx = battery_cost(Policy::Phoenix, 300.0, 60.0, 40.0, &e, 5000.0);
        assert!((ralt - phx - 8e-3).abs() < 1e-15);
    }

    #[test]
    fn terrestrial_leg() {
        let d = terrestrial_delay(10_000.0);
        assert!((d - 0.0498).abs() < 1e-4, "{d}");
        assert_eq!(terrestrial_delay(0.0), 0.0);
    }

    #[test]
    fn latency_of_two_hops() {
        let p = |x: f64| Position {
            x,
            y: 0.0,
            z: 0.0,
            epoch: 0.0,
        };
        let pos = [p(0.0), p(1000.0), p(2000.0)];
        let r = Route {
            nodes: vec![0, 1, 2],
            terrestrial_km: None,
        };
        assert!((path_latency(&r, &pos) - 6.6712e-3).abs() < 1e-7);
        assert_eq!(path_latency(&Route::default(), &pos), 0.0);
        let off = Route {
            nodes: vec![0, 1, 2],
            terrestrial_km: Some(10_000.0),
        };
        assert!((path_latency(&off, &pos) - path_latency(&r, &pos) - terrestrial_delay(10_000.0)).abs() < 1e-15);
    }

    #[test]
    fn bad_edge_list_line() {
        let e = parse_edge_list("a b 1\n", 0.5).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}
