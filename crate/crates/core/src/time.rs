//! Time scale helpers shared by the orbit and sun models.

use chrono::{DateTime, Utc};

/// Julian date of the J2000.0 epoch.
pub const J2000_JD: f64 = 2_451_545.0;

const UNIX_EPOCH_JD: f64 = 2_440_587.5;

/// Julian date (UTC, used as a UT1 stand-in).
pub fn julian_date(t: DateTime<Utc>) -> f64 {
    let secs = t.timestamp() as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9;
    UNIX_EPOCH_JD + secs / 86_400.0
}

/// Seconds from `from` to `to`, with sub-second resolution.
pub fn seconds_between(from: DateTime<Utc>, to: DateTime<Utc>) -> f64 {
    let d = to - from;
    d.num_seconds() as f64 + f64::from(d.subsec_nanos()) * 1e-9
}

/// Greenwich mean sidereal time in degrees, normalised to [0, 360).
pub fn gmst_deg(t: DateTime<Utc>) -> f64 {
    let d = julian_date(t) - J2000_JD;
    let c = d / 36_525.0;
    let g = 280.460_618_37 + 360.985_647_366_29 * d + 0.000_387_933 * c * c - c * c * c / 38_710_000.0;
    g.rem_euclid(360.0)
}
