//! User cells, diurnal load, and the per-interval web-service flow set.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constellation::{csv_to_error, GroundSite, SiteRole};
use crate::error::{Error, Result};

const BUNDLED_DISTRIBUTION: &str = include_str!("../data/user_distribution.csv");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSite {
    pub site: GroundSite,
    pub weight: f64,
}

#[derive(Debug, Deserialize)]
struct DistributionRow {
    latitude: f64,
    longitude: f64,
    weight: f64,
}

fn parse_distribution<R: std::io::Read>(rdr: R, path: &Path) -> Result<Vec<WeightedSite>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(rdr);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<DistributionRow>().enumerate() {
        let err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 2,
            msg,
        };
        let row = row.map_err(|e| err(e.to_string()))?;
        let site = GroundSite::new(row.latitude, row.longitude, SiteRole::UserCell).map_err(|e| err(e.to_string()))?;
        if !(row.weight >= 0.0) {
            return Err(err(format!("negative weight {}", row.weight)));
        }
        out.push(WeightedSite {
            site,
            weight: row.weight,
        });
    }
    Ok(out)
}

/// The bundled 20-site population-center list.
pub fn bundled_distribution() -> Vec<WeightedSite> {
    parse_distribution(BUNDLED_DISTRIBUTION.as_bytes(), Path::new("<bundled>")).expect("bundled distribution parses")
}

/// Reads a `latitude,longitude,weight` CSV.
pub fn load_distribution(path: &Path) -> Result<Vec<WeightedSite>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_distribution(f, path).map_err(|e| match e {
        Error::Csv(c) => csv_to_error(path, c),
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserCell {
    pub site: GroundSite,
    pub base_rate_mbps: f64,
    pub population_weight: f64,
}

/// Samples `n` cells with replacement, proportionally to weight.
pub fn generate_cells<R: Rng>(
    n: usize,
    distribution: &[WeightedSite],
    base_rate_mbps: f64,
    rng: &mut R,
) -> Result<Vec<UserCell>> {
    if distribution.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let total: f64 = distribution.iter().map(|w| w.weight).sum();
    if distribution.iter().any(|w| !(w.weight >= 0.0)) || !(total > 0.0) {
        return Err(Error::DegenerateWeights);
    }
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        let mut target = rng.gen::<f64>() * total;
        let mut chosen = distribution.len() - 1;
        for (i, w) in distribution.iter().enumerate() {
            if w.weight > 0.0 && target < w.weight {
                chosen = i;
                break;
            }
            target -= w.weight;
        }
        // float slop can walk past the end; fall back to the last positive weight
        if distribution[chosen].weight == 0.0 {
            chosen = distribution.iter().rposition(|w| w.weight > 0.0).unwrap_or(chosen);
        }
        let w = &distribution[chosen];
        cells.push(UserCell {
            site: w.site,
            base_rate_mbps,
            population_weight: w.weight / total,
        });
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiurnalParams {
    pub f_min: f64,
    pub peak_hour: f64,
}

impl Default for DiurnalParams {
    fn default() -> Self {
        Self {
            f_min: 0.3,
            peak_hour: 20.0,
        }
    }
}

/// Load multiplier in `[f_min, 1]`: cosine in local solar hour, peaking at
/// `peak_hour` and bottoming out twelve hours later.
pub fn diurnal_factor(longitude_deg: f64, t: f64, params: &DiurnalParams) -> f64 {
    let hour = (t / 3600.0 + longitude_deg / 15.0).rem_euclid(24.0);
    let shape = 0.5 * (1.0 + (2.0 * PI * (hour - params.peak_hour) / 24.0).cos());
    params.f_min + (1.0 - params.f_min) * shape
}

/// One destination per cell, never the cell itself. Fixed for a scenario.
pub fn pair_destinations<R: Rng>(n_cells: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n_cells < 2 {
        return Err(Error::TooFewCells(n_cells));
    }
    Ok((0..n_cells)
        .map(|i| {
            let j = rng.gen_range(0..n_cells - 1);
            if j >= i {
                j + 1
            } else {
                j
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Active,
    Rerouted,
    Completed,
    Dropped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowEndpoint {
    Cell(usize),
    Station(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub id: usize,
    pub src: usize,
    pub dst: FlowEndpoint,
    pub rate_mbps: f64,
    pub created_at: f64,
    pub route: crate::routing::Route,
    pub status: FlowStatus,
}

/// Offered flows at `t`; each cell sends to its paired destination.
pub fn active_flows(cells: &[UserCell], pairing: &[usize], t: f64, diurnal: &DiurnalParams) -> Result<Vec<Flow>> {
    if cells.len() < 2 {
        return Err(Error::TooFewCells(cells.len()));
    }
    Ok(cells
        .iter()
        .zip(pairing)
        .enumerate()
        .map(|(i, (cell, &dst))| Flow {
            id: i,
            src: i,
            dst: FlowEndpoint::Cell(dst),
            rate_mbps: cell.base_rate_mbps * diurnal_factor(cell.site.longitude_deg, t, diurnal),
            created_at: t,
            route: Default::default(),
            status: FlowStatus::Active,
        })
        .collect())
}
