//! Constellation geometry: Walker-delta and near-polar star layouts on
//! circular orbits, +Grid inter-satellite links, ground visibility, eclipse
//! and propagation delay.
//!
//! Everything is expressed in an Earth-centered inertial frame in km. The
//! Earth is a sphere of radius [`EARTH_RADIUS_KM`] whose prime meridian lies
//! on the +x axis at scenario start and rotates at [`EARTH_ROTATION_RAD_S`].

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EARTH_RADIUS_KM: f64 = 6371.0;
pub const MU_KM3_S2: f64 = 398_600.441_8;
pub const SPEED_OF_LIGHT_KM_S: f64 = 299_792.458;
pub const EARTH_ROTATION_RAD_S: f64 = 7.292_115_9e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstellationKind {
    WalkerDelta,
    NearPolarStar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub num_planes: usize,
    pub sats_per_plane: usize,
    pub altitude_km: f64,
    pub inclination_deg: f64,
    /// Phase offset in degrees between slot 0 of adjacent planes.
    pub phasing_offset_deg: f64,
    pub kind: ConstellationKind,
}

impl ConstellationSpec {
    /// Starlink shell 1 geometry.
    pub fn starlink_shell1() -> Self {
        Self {
            num_planes: 72,
            sats_per_plane: 22,
            altitude_km: 550.0,
            inclination_deg: 53.0,
            phasing_offset_deg: 360.0 / (72.0 * 22.0),
            kind: ConstellationKind::WalkerDelta,
        }
    }

    /// Near-polar star standing in for Kuiper.
    pub fn kuiper_like() -> Self {
        Self {
            num_planes: 34,
            sats_per_plane: 34,
            altitude_km: 630.0,
            inclination_deg: 98.0,
            phasing_offset_deg: 360.0 / (34.0 * 34.0),
            kind: ConstellationKind::NearPolarStar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_planes == 0 || self.sats_per_plane == 0 {
            return Err(Error::InvalidConstellation(format!(
                "need at least one plane and one slot, got {}x{}",
                self.num_planes, self.sats_per_plane
            )));
        }
        if !(0.0..=180.0).contains(&self.inclination_deg) {
            return Err(Error::InvalidConstellation(format!(
                "inclination {} outside [0, 180] degrees",
                self.inclination_deg
            )));
        }
        if !(self.altitude_km > 0.0) {
            return Err(Error::InvalidConstellation(format!(
                "altitude must be positive, got {} km",
                self.altitude_km
            )));
        }
        Ok(())
    }

    pub fn num_satellites(&self) -> usize {
        self.num_planes * self.sats_per_plane
    }

    pub fn semi_major_axis_km(&self) -> f64 {
        EARTH_RADIUS_KM + self.altitude_km
    }

    pub fn mean_motion_rad_s(&self) -> f64 {
        (MU_KM3_S2 / self.semi_major_axis_km().powi(3)).sqrt()
    }

    pub fn period_s(&self) -> f64 {
        orbital_period_s(self.semi_major_axis_km())
    }

    /// Right-ascension spacing between adjacent planes.
    pub fn plane_spacing_deg(&self) -> f64 {
        let span = match self.kind {
            ConstellationKind::WalkerDelta => 360.0,
            ConstellationKind::NearPolarStar => 180.0,
        };
        span / self.num_planes as f64
    }

    pub fn index_of(&self, id: SatelliteId) -> usize {
        id.plane * self.sats_per_plane + id.slot
    }

    pub fn id_of(&self, index: usize) -> SatelliteId {
        SatelliteId {
            plane: index / self.sats_per_plane,
            slot: index % self.sats_per_plane,
        }
    }
}

pub fn orbital_period_s(semi_major_axis_km: f64) -> f64 {
    2.0 * PI * (semi_major_axis_km.powi(3) / MU_KM3_S2).sqrt()
}

/// Satellite identifier; ordering is (plane, slot).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SatelliteId {
    pub plane: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteRole {
    UserCell,
    GroundStation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundSite {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub role: SiteRole,
}

impl GroundSite {
    pub fn new(latitude_deg: f64, longitude_deg: f64, role: SiteRole) -> Result<Self> {
        if !(-90.0..=90.0).contains(&latitude_deg) {
            return Err(Error::InvalidSite(format!("latitude {latitude_deg} out of range")));
        }
        if !(-180.0..180.0).contains(&longitude_deg) {
            return Err(Error::InvalidSite(format!("longitude {longitude_deg} out of range")));
        }
        Ok(Self {
            latitude_deg,
            longitude_deg,
            role,
        })
    }

    /// Inertial position of the site at `epoch` seconds.
    pub fn position(&self, epoch: f64) -> Position {
        let lat = self.latitude_deg.to_radians();
        let theta = self.longitude_deg.to_radians() + EARTH_ROTATION_RAD_S * epoch;
        Position {
            x: EARTH_RADIUS_KM * lat.cos() * theta.cos(),
            y: EARTH_RADIUS_KM * lat.cos() * theta.sin(),
            z: EARTH_RADIUS_KM * lat.sin(),
            epoch,
        }
    }

    /// Great-circle surface distance in km.
    pub fn great_circle_km(&self, other: &GroundSite) -> f64 {
        let (p1, p2) = (self.latitude_deg.to_radians(), other.latitude_deg.to_radians());
        let dlat = p2 - p1;
        let dlon = (other.longitude_deg - self.longitude_deg).to_radians();
        let h = (dlat / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dlon / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
    }
}

#[derive(Debug, Deserialize)]
struct SiteRow {
    latitude: f64,
    longitude: f64,
    role: SiteRole,
}

/// Reads a `latitude,longitude,role` CSV.
pub fn load_sites(path: &Path) -> Result<Vec<GroundSite>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_to_error(path, e))?;
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<SiteRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: e.to_string(),
        })?;
        let site = GroundSite::new(row.latitude, row.longitude, row.role).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: e.to_string(),
        })?;
        out.push(site);
    }
    Ok(out)
}

pub(crate) fn csv_to_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            msg: format!("{other:?}"),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub epoch: f64,
}

impl Position {
    pub fn norm(&self) -> f64 {
        self.dot_xyz(self.x, self.y, self.z).sqrt()
    }

    fn dot_xyz(&self, x: f64, y: f64, z: f64) -> f64 {
        self.x * x + self.y * y + self.z * z
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// A satellite's fixed orbital slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalSlot {
    pub id: SatelliteId,
    pub raan_deg: f64,
    /// Argument of latitude at epoch 0.
    pub phase_deg: f64,
}

pub fn build_constellation(spec: &ConstellationSpec) -> Result<Vec<OrbitalSlot>> {
    spec.validate()?;
    let plane_spacing = spec.plane_spacing_deg();
    let slot_spacing = 360.0 / spec.sats_per_plane as f64;
    let mut out = Vec::with_capacity(spec.num_satellites());
    for plane in 0..spec.num_planes {
        for slot in 0..spec.sats_per_plane {
            let phase = slot as f64 * slot_spacing + plane as f64 * spec.phasing_offset_deg;
            out.push(OrbitalSlot {
                id: SatelliteId { plane, slot },
                raan_deg: plane as f64 * plane_spacing,
                phase_deg: phase.rem_euclid(360.0),
            });
        }
    }
    Ok(out)
}

pub fn propagate(sat: &OrbitalSlot, spec: &ConstellationSpec, t: f64) -> Position {
    let a = spec.semi_major_axis_km();
    let u = sat.phase_deg.to_radians() + spec.mean_motion_rad_s() * t;
    let raan = sat.raan_deg.to_radians();
    let inc = spec.inclination_deg.to_radians();
    let (su, cu) = u.sin_cos();
    let (so, co) = raan.sin_cos();
    let (si, ci) = inc.sin_cos();
    Position {
        x: a * (co * cu - so * su * ci),
        y: a * (so * cu + co * su * ci),
        z: a * su * si,
        epoch: t,
    }
}

/// +Grid links as `(lower index, higher index)` pairs, sorted.
pub fn isl_topology(spec: &ConstellationSpec) -> Vec<(usize, usize)> {
    let (planes, slots) = (spec.num_planes, spec.sats_per_plane);
    let mut edges = std::collections::BTreeSet::new();
    let mut add = |a: SatelliteId, b: SatelliteId| {
        let (i, j) = (spec.index_of(a), spec.index_of(b));
        if i != j {
            edges.insert((i.min(j), i.max(j)));
        }
    };
    for plane in 0..planes {
        for slot in 0..slots {
            let here = SatelliteId { plane, slot };
            add(
                here,
                SatelliteId {
                    plane,
                    slot: (slot + 1) % slots,
                },
            );
            let next_plane = plane + 1;
            if next_plane < planes {
                add(
                    here,
                    SatelliteId {
                        plane: next_plane,
                        slot,
                    },
                );
            } else if spec.kind == ConstellationKind::WalkerDelta {
                add(here, SatelliteId { plane: 0, slot });
            }
        }
    }
    edges.into_iter().collect()
}

/// Elevation of the satellite above the site's local horizon, degrees.
pub fn elevation_deg(sat: &Position, site: &GroundSite) -> f64 {
    elevation_from(sat, &site.position(sat.epoch))
}

/// Elevation seen from a ground point already expressed at the satellite's epoch.
pub fn elevation_from(sat: &Position, g: &Position) -> f64 {
    let (dx, dy, dz) = (sat.x - g.x, sat.y - g.y, sat.z - g.z);
    let range = (dx * dx + dy * dy + dz * dz).sqrt();
    if range == 0.0 {
        return 90.0;
    }
    let up = (dx * g.x + dy * g.y + dz * g.z) / (range * g.norm());
    up.clamp(-1.0, 1.0).asin().to_degrees()
}

pub fn visible(sat: &Position, site: &GroundSite, min_elevation_deg: f64) -> bool {
    elevation_deg(sat, site) >= min_elevation_deg
}

/// Cylindrical-shadow eclipse test; `sun_direction` must be a unit vector.
pub fn in_eclipse(sat: &Position, sun_direction: [f64; 3]) -> bool {
    let along = sat.dot_xyz(sun_direction[0], sun_direction[1], sun_direction[2]);
    if along >= 0.0 {
        return false;
    }
    let px = sat.x - along * sun_direction[0];
    let py = sat.y - along * sun_direction[1];
    let pz = sat.z - along * sun_direction[2];
    (px * px + py * py + pz * pz).sqrt() < EARTH_RADIUS_KM
}

/// Sun direction at `t`, optionally rotating about the polar axis once a day.
pub fn sun_direction_at(base: [f64; 3], rotating: bool, t: f64) -> [f64; 3] {
    let n = (base[0] * base[0] + base[1] * base[1] + base[2] * base[2]).sqrt();
    let b = [base[0] / n, base[1] / n, base[2] / n];
    if !rotating {
        return b;
    }
    let (s, c) = (2.0 * PI * t / 86_400.0).sin_cos();
    [c * b[0] - s * b[1], s * b[0] + c * b[1], b[2]]
}

pub fn propagation_delay(a: &Position, b: &Position) -> f64 {
    a.distance(b) / SPEED_OF_LIGHT_KM_S
}
