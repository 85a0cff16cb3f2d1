//! Two-body propagation with J2 secular drift of the node and perigee.
//!
//! The TLE mean motion is taken as the observed mean-anomaly rate, so it
//! already carries the J2 mean-anomaly drift; the semi-major axis follows
//! from Kepler's third law. Node and perigee rates are the first-order J2
//! secular terms.

use super::{OrbitError, SatelliteState, TleElements, Trajectory, EARTH_RADIUS_KM, J2, MU_EARTH};
use chrono::{DateTime, Utc};
use std::f64::consts::TAU;

/// Mean (secular) angular elements at a given instant, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanElements {
    pub raan: f64,
    pub arg_perigee: f64,
    pub mean_anomaly: f64,
}

#[derive(Debug, Clone)]
pub struct Propagator {
    epoch: DateTime<Utc>,
    semi_major_axis: f64,
    eccentricity: f64,
    inclination: f64,
    raan0: f64,
    argp0: f64,
    m0: f64,
    /// rad/s
    mean_motion: f64,
    raan_rate: f64,
    argp_rate: f64,
}

impl Propagator {
    /// Propagator including J2 secular node and perigee drift.
    pub fn new(elements: &TleElements) -> Result<Self, OrbitError> {
        Self::build(elements, true)
    }

    /// Pure Keplerian propagator (no perturbations).
    pub fn two_body(elements: &TleElements) -> Result<Self, OrbitError> {
        Self::build(elements, false)
    }

    fn build(e: &TleElements, j2: bool) -> Result<Self, OrbitError> {
        if !(0.0..1.0).contains(&e.eccentricity) {
            return Err(OrbitError::Eccentricity(e.eccentricity));
        }
        if !(e.mean_motion > 0.0) || !e.mean_motion.is_finite() {
            return Err(OrbitError::MeanMotion(e.mean_motion));
        }
        let n = e.mean_motion * TAU / 86_400.0;
        let a = (MU_EARTH / (n * n)).cbrt();
        let inc = e.inclination.to_radians();
        let (raan_rate, argp_rate) = if j2 {
            let p = a * (1.0 - e.eccentricity * e.eccentricity);
            let k = 1.5 * n * J2 * (EARTH_RADIUS_KM / p).powi(2);
            let c = inc.cos();
            (-k * c, 0.5 * k * (5.0 * c * c - 1.0))
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            epoch: e.epoch,
            semi_major_axis: a,
            eccentricity: e.eccentricity,
            inclination: inc,
            raan0: e.raan.to_radians(),
            argp0: e.arg_perigee.to_radians(),
            m0: e.mean_anomaly.to_radians(),
            mean_motion: n,
            raan_rate,
            argp_rate,
        })
    }

    pub fn semi_major_axis_km(&self) -> f64 {
        self.semi_major_axis
    }

    pub fn period_seconds(&self) -> f64 {
        TAU / self.mean_motion
    }

    /// Secular node regression/precession rate in rad/s.
    pub fn raan_rate(&self) -> f64 {
        self.raan_rate
    }

    pub fn mean_elements_at(&self, t: DateTime<Utc>) -> MeanElements {
        let dt = crate::time::seconds_between(self.epoch, t);
        MeanElements {
            raan: (self.raan0 + self.raan_rate * dt).rem_euclid(TAU),
            arg_perigee: (self.argp0 + self.argp_rate * dt).rem_euclid(TAU),
            mean_anomaly: (self.m0 + self.mean_motion * dt).rem_euclid(TAU),
        }
    }

    pub fn propagate(&self, t: DateTime<Utc>) -> Result<SatelliteState, OrbitError> {
        let mean = self.mean_elements_at(t);
        let e = self.eccentricity;
        let a = self.semi_major_axis;
        let ecc_anom = solve_kepler(mean.mean_anomaly, e);
        let (sin_e, cos_e) = ecc_anom.sin_cos();
        let root = (1.0 - e * e).sqrt();
        let r = a * (1.0 - e * cos_e);
        // Perifocal position and velocity.
        let px = a * (cos_e - e);
        let py = a * root * sin_e;
        let vfac = (MU_EARTH * a).sqrt() / r;
        let vx = -vfac * sin_e;
        let vy = vfac * root * cos_e;

        let (so, co) = mean.raan.sin_cos();
        let (sw, cw) = mean.arg_perigee.sin_cos();
        let (si, ci) = self.inclination.sin_cos();
        // Columns of the perifocal-to-inertial rotation.
        let p = [co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si];
        let q = [-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si];
        let position = [px * p[0] + py * q[0], px * p[1] + py * q[1], px * p[2] + py * q[2]];
        let velocity = [vx * p[0] + vy * q[0], vx * p[1] + vy * q[1], vx * p[2] + vy * q[2]];

        if r < EARTH_RADIUS_KM {
            return Err(OrbitError::SubSurface { time: t, radius_km: r });
        }
        Ok(SatelliteState { time: t, position, velocity })
    }
}

impl Trajectory for Propagator {
    fn state_at(&self, t: DateTime<Utc>) -> Result<SatelliteState, OrbitError> {
        self.propagate(t)
    }
}

fn solve_kepler(m: f64, e: f64) -> f64 {
    let mut ea = if e < 0.8 { m } else { std::f64::consts::PI };
    for _ in 0..50 {
        let f = ea - e * ea.sin() - m;
        let step = f / (1.0 - e * ea.cos());
        ea -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    ea
}
