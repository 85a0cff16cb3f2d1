//! Orbit geometry: from element sets and station coordinates to access windows.

mod access;
mod ephemeris;
mod geometry;
mod propagate;
mod sun;
mod tle;

pub use access::{compute_access_windows, union_duration, AccessConfig, AccessInterval, AccessSample, NightPredicate};
pub use ephemeris::{Ephemeris, EphemerisError};
pub use geometry::{look_angles, station_eci, LookAngles};
pub use propagate::{MeanElements, Propagator};
pub use sun::{in_earth_shadow, sun_direction_eci, sun_elevation};
pub use tle::{parse_tle, TleElements, TleError, TleErrorKind, TleLine};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Equatorial Earth radius in km (spherical model).
pub const EARTH_RADIUS_KM: f64 = 6378.137;
/// Earth gravitational parameter in km^3/s^2.
pub const MU_EARTH: f64 = 398_600.441_8;
/// Second zonal harmonic.
pub const J2: f64 = 1.082_626_68e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("eccentricity {0} is not in [0, 1)")]
    Eccentricity(f64),
    #[error("mean motion {0} rev/day must be positive")]
    MeanMotion(f64),
    #[error("propagated radius {radius_km:.3} km is below the Earth surface at {time}")]
    SubSurface { time: DateTime<Utc>, radius_km: f64 },
    #[error("time {0} is outside the ephemeris coverage")]
    OutsideEphemeris(DateTime<Utc>),
    #[error("invalid station {name:?}: {reason}")]
    Station { name: String, reason: String },
    #[error("invalid access configuration: {0}")]
    Config(String),
}

/// A ground station (optical ground station, OGS) with its delivery weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStation {
    pub name: String,
    /// Geodetic latitude in degrees, treated as geocentric on the spherical Earth.
    pub latitude: f64,
    pub longitude: f64,
    /// Altitude above the reference sphere in meters.
    #[serde(default)]
    pub altitude: f64,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

impl GroundStation {
    pub fn new(name: impl Into<String>, latitude: f64, longitude: f64, altitude: f64) -> Self {
        Self { name: name.into(), latitude, longitude, altitude, weight: 1.0 }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn validate(&self) -> Result<(), OrbitError> {
        let bad = |reason: &str| OrbitError::Station { name: self.name.clone(), reason: reason.into() };
        if !(-90.0..=90.0).contains(&self.latitude) {
            return Err(bad("latitude outside [-90, 90]"));
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            return Err(bad("longitude outside [-180, 180]"));
        }
        if !self.altitude.is_finite() {
            return Err(bad("altitude is not finite"));
        }
        if !self.weight.is_finite() || self.weight < 0.0 {
            return Err(bad("weight must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Instantaneous satellite state in the Earth-centred inertial frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteState {
    pub time: DateTime<Utc>,
    /// km
    pub position: [f64; 3],
    /// km/s
    pub velocity: [f64; 3],
}

impl SatelliteState {
    pub fn radius_km(&self) -> f64 {
        norm(self.position)
    }
}

/// Anything that can produce an inertial satellite state at a given time.
pub trait Trajectory: Send + Sync {
    fn state_at(&self, t: DateTime<Utc>) -> Result<SatelliteState, OrbitError>;
}

pub(crate) fn norm(v: [f64; 3]) -> f64 {
    dot(v, v).sqrt()
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}
