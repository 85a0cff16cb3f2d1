//! Topocentric look angles on a spherical, rotating Earth.

use super::{dot, norm, scale, sub, GroundStation, SatelliteState, EARTH_RADIUS_KM};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LookAngles {
    /// degrees above the local horizon
    pub elevation: f64,
    /// degrees east of north, [0, 360)
    pub azimuth: f64,
    /// km, station to satellite
    pub slant_range: f64,
}

/// Station position and local up/east/north unit vectors in the inertial frame.
pub(crate) struct Topocentre {
    pub position: [f64; 3],
    pub up: [f64; 3],
    pub east: [f64; 3],
    pub north: [f64; 3],
}

pub(crate) fn topocentre(station: &GroundStation, t: DateTime<Utc>) -> Topocentre {
    let theta = (crate::time::gmst_deg(t) + station.longitude).to_radians();
    let lat = station.latitude.to_radians();
    let (st, ct) = theta.sin_cos();
    let (sl, cl) = lat.sin_cos();
    let up = [cl * ct, cl * st, sl];
    let east = [-st, ct, 0.0];
    let north = [-sl * ct, -sl * st, cl];
    let radius = EARTH_RADIUS_KM + station.altitude / 1000.0;
    Topocentre { position: scale(up, radius), up, east, north }
}

/// Inertial position of the station at `t`, km.
pub fn station_eci(station: &GroundStation, t: DateTime<Utc>) -> [f64; 3] {
    topocentre(station, t).position
}

pub fn look_angles(state: &SatelliteState, station: &GroundStation, t: DateTime<Utc>) -> LookAngles {
    let topo = topocentre(station, t);
    let rho = sub(state.position, topo.position);
    let range = norm(rho);
    if range == 0.0 {
        return LookAngles { elevation: 90.0, azimuth: 0.0, slant_range: 0.0 };
    }
    let up = dot(rho, topo.up);
    let elevation = (up / range).clamp(-1.0, 1.0).asin().to_degrees();
    let azimuth = dot(rho, topo.east).atan2(dot(rho, topo.north)).to_degrees().rem_euclid(360.0);
    LookAngles { elevation, azimuth, slant_range: range }
}
