//! Low-precision solar ephemeris (about 0.01 deg between 1950 and 2050).

use super::{dot, norm, scale, sub, GroundStation, EARTH_RADIUS_KM};
use crate::time::{julian_date, J2000_JD};
use chrono::{DateTime, Utc};

/// Unit vector from the Earth's centre towards the Sun, inertial frame.
pub fn sun_direction_eci(t: DateTime<Utc>) -> [f64; 3] {
    let d = julian_date(t) - J2000_JD;
    let mean_lon = (280.460 + 0.985_647_4 * d).to_radians();
    let g = (357.528 + 0.985_600_3 * d).to_radians();
    let ecl_lon = mean_lon + (1.915f64.to_radians()) * g.sin() + (0.020f64.to_radians()) * (2.0 * g).sin();
    let obliquity = (23.439 - 0.000_000_4 * d).to_radians();
    let (sl, cl) = ecl_lon.sin_cos();
    [cl, obliquity.cos() * sl, obliquity.sin() * sl]
}

/// Solar elevation above the station's horizon, degrees.
pub fn sun_elevation(station: &GroundStation, t: DateTime<Utc>) -> f64 {
    let s = sun_direction_eci(t);
    let up = super::geometry::topocentre(station, t).up;
    dot(s, up).clamp(-1.0, 1.0).asin().to_degrees()
}

/// Whether a point is inside the cylindrical Earth shadow.
pub fn in_earth_shadow(position: [f64; 3], t: DateTime<Utc>) -> bool {
    let s = sun_direction_eci(t);
    let along = dot(position, s);
    if along >= 0.0 {
        return false;
    }
    norm(sub(position, scale(s, along))) < EARTH_RADIUS_KM
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn equinox_noon_and_midnight_at_equator() {
        // 2024-03-20 12:00 UTC: the equation of time is about -7.6 min, so
        // the Sun transits near longitude +1.9 deg.
        let t = Utc.with_ymd_and_hms(2024, 3, 20, 12, 0, 0).unwrap();
        let noon = GroundStation::new("noon", 0.0, 1.9, 0.0);
        let midnight = GroundStation::new("midnight", 0.0, 1.9 - 180.0, 0.0);
        assert!((sun_elevation(&noon, t) - 90.0).abs() < 1.0, "{}", sun_elevation(&noon, t));
        assert!((sun_elevation(&midnight, t) + 90.0).abs() < 1.0);
    }

    #[test]
    fn solstice_noon_at_forty_north() {
        let t = Utc.with_ymd_and_hms(2024, 6, 21, 12, 0, 0).unwrap();
        let st = GroundStation::new("40N", 40.0, 0.4, 0.0);
        let expected = 90.0 - 40.0 + 23.44;
        assert!((sun_elevation(&st, t) - expected).abs() < 1.0);
    }

    #[test]
    fn shadow_cylinder() {
        let t = Utc.with_ymd_and_hms(2016, 9, 19, 0, 0, 0).unwrap();
        let s = sun_direction_eci(t);
        assert!(in_earth_shadow(scale(s, -7000.0), t));
        assert!(!in_earth_shadow(scale(s, 7000.0), t));
        // Far off the axis on the night side is still lit.
        let perp = [-s[1], s[0], 0.0];
        let p =
            [perp[0] * 9000.0 / norm(perp) - s[0] * 100.0, perp[1] * 9000.0 / norm(perp) - s[1] * 100.0, -s[2] * 100.0];
        assert!(!in_earth_shadow(p, t));
    }
}
