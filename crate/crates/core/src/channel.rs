//! Downlink loss budget: geometric spreading, atmospheric extinction,
//! cloud attenuation and fixed system losses, all in dB.

use crate::cloud::{cloud_loss, CloudError};
use crate::orbit::LookAngles;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("slant range must be positive, got {0} km")]
    Range(f64),
    #[error("elevation must be above the horizon, got {0} deg")]
    Elevation(f64),
    #[error("invalid optical parameter: {0}")]
    Params(String),
    #[error(transparent)]
    Cloud(#[from] CloudError),
}

/// How the received beam width enters the Gaussian aperture capture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamConvention {
    /// The received beam width is the Gaussian beam radius.
    #[default]
    Full,
    /// Half the received beam width is used as the radius.
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OpticalParams {
    /// m
    pub wavelength: f64,
    /// Full divergence angle, rad.
    pub divergence: f64,
    /// m
    pub receiver_diameter: f64,
    /// m; informational, see [`diffraction_limited_divergence`].
    pub transmitter_diameter: f64,
    /// Atmospheric extinction at zenith, dB.
    pub zenith_atm_loss_db: f64,
    pub pointing_loss_db: f64,
    pub coupling_loss_db: f64,
    pub detection_loss_db: f64,
    #[serde(default)]
    pub beam_convention: BeamConvention,
}

impl Default for OpticalParams {
    /// Micius-class downlink at 1550 nm.
    fn default() -> Self {
        Self {
            wavelength: 1550e-9,
            divergence: 10e-6,
            receiver_diameter: 1.2,
            transmitter_diameter: 0.3,
            zenith_atm_loss_db: 2.0,
            pointing_loss_db: 2.0,
            coupling_loss_db: 3.0,
            detection_loss_db: 3.0,
            beam_convention: BeamConvention::Full,
        }
    }
}

impl OpticalParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |m: &str| Err(ChannelError::Params(m.into()));
        if !(self.wavelength > 100e-9 && self.wavelength < 10e-6) {
            return bad("wavelength must lie in (100 nm, 10 um)");
        }
        for (name, v) in [
            ("divergence", self.divergence),
            ("receiver_diameter", self.receiver_diameter),
            ("transmitter_diameter", self.transmitter_diameter),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ChannelError::Params(format!("{name} must be positive")));
            }
        }
        for (name, v) in [
            ("zenith_atm_loss_db", self.zenith_atm_loss_db),
            ("pointing_loss_db", self.pointing_loss_db),
            ("coupling_loss_db", self.coupling_loss_db),
            ("detection_loss_db", self.detection_loss_db),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ChannelError::Params(format!("{name} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    /// Pointing, coupling and detection losses, dB.
    pub fn fixed_loss_db(&self) -> f64 {
        self.pointing_loss_db + self.coupling_loss_db + self.detection_loss_db
    }
}

/// 1.22 λ / D_t, rad.
pub fn diffraction_limited_divergence(wavelength: f64, transmitter_diameter: f64) -> f64 {
    1.22 * wavelength / transmitter_diameter
}

/// Received beam width in meters at slant range `range_km`.
pub fn beam_width(range_km: f64, params: &OpticalParams) -> Result<f64, ChannelError> {
    if !(range_km > 0.0) {
        return Err(ChannelError::Range(range_km));
    }
    let near = params.wavelength / (PI * params.divergence);
    let far = params.divergence * range_km * 1e3;
    Ok(near.hypot(far))
}

/// Fraction of a Gaussian beam captured by the receiver aperture.
pub fn captured_fraction(range_km: f64, params: &OpticalParams) -> Result<f64, ChannelError> {
    let mut w = beam_width(range_km, params)?;
    if params.beam_convention == BeamConvention::Half {
        w *= 0.5;
    }
    let d = params.receiver_diameter;
    Ok(-(-(d * d) / (2.0 * w * w)).exp_m1())
}

/// Geometric (beam spreading) loss, dB.
pub fn geometric_loss(range_km: f64, params: &OpticalParams) -> Result<f64, ChannelError> {
    Ok(-10.0 * captured_fraction(range_km, params)?.log10())
}

/// Zenith extinction stretched by the 1/sin(elevation) path elongation, dB.
pub fn atmospheric_loss(elevation_deg: f64, zenith_loss_db: f64) -> Result<f64, ChannelError> {
    if !(elevation_deg > 0.0) {
        return Err(ChannelError::Elevation(elevation_deg));
    }
    if elevation_deg >= 90.0 {
        return Ok(zenith_loss_db);
    }
    Ok(zenith_loss_db / elevation_deg.to_radians().sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub geometric_db: f64,
    pub atmospheric_db: f64,
    /// `+inf` under full cloud blockage.
    pub cloud_db: f64,
    pub fixed_db: f64,
    pub total_db: f64,
    pub transmittance: f64,
}

impl LossBreakdown {
    pub fn from_components(geometric_db: f64, atmospheric_db: f64, cloud_db: f64, fixed_db: f64) -> Self {
        let total_db = geometric_db + atmospheric_db + cloud_db + fixed_db;
        let transmittance = if total_db.is_infinite() { 0.0 } else { 10f64.powf(-total_db / 10.0).min(1.0) };
        Self { geometric_db, atmospheric_db, cloud_db, fixed_db, total_db, transmittance }
    }
}

pub fn total_loss(look: &LookAngles, cloud_index: u8, params: &OpticalParams) -> Result<LossBreakdown, ChannelError> {
    if !(look.elevation > 0.0) {
        return Err(ChannelError::Elevation(look.elevation));
    }
    let geometric = geometric_loss(look.slant_range, params)?;
    let atmospheric = atmospheric_loss(look.elevation, params.zenith_atm_loss_db)?;
    let cloud = cloud_loss(cloud_index)?;
    Ok(LossBreakdown::from_components(geometric, atmospheric, cloud, params.fixed_loss_db()))
}

/// One time step of a link: geometry, cloud index and the resulting losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub time: DateTime<Utc>,
    pub look: LookAngles,
    pub cloud_index: u8,
    pub loss: LossBreakdown,
}

impl LinkSample {
    pub fn new(
        time: DateTime<Utc>,
        look: LookAngles,
        cloud_index: u8,
        params: &OpticalParams,
    ) -> Result<Self, ChannelError> {
        Ok(Self { time, look, cloud_index, loss: total_loss(&look, cloud_index, params)? })
    }
}
