//! Precomputed ephemeris replay (`time_utc,x_km,y_km,z_km`).

use super::{OrbitError, SatelliteState, Trajectory};
use chrono::{DateTime, Utc};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EphemerisError {
    #[error("ephemeris is empty")]
    Empty,
    #[error("line {line}: expected header `time_utc,x_km,y_km,z_km`")]
    Header { line: usize },
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
    #[error("line {line}: time is not strictly increasing")]
    NonMonotone { line: usize },
}

/// Inertial positions at tabulated times, linearly interpolated in between.
#[derive(Debug, Clone)]
pub struct Ephemeris {
    times: Vec<DateTime<Utc>>,
    positions: Vec<[f64; 3]>,
}

impl Ephemeris {
    pub fn parse_csv(text: &str) -> Result<Self, EphemerisError> {
        let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = rows.next().ok_or(EphemerisError::Empty)?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["time_utc", "x_km", "y_km", "z_km"] {
            return Err(EphemerisError::Header { line: 1 });
        }
        let mut times = Vec::new();
        let mut positions = Vec::new();
        for (idx, raw) in rows {
            let line = idx + 1;
            let bad = |reason: String| EphemerisError::Row { line, reason };
            let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", fields.len())));
            }
            let t = DateTime::parse_from_rfc3339(fields[0])
                .map_err(|e| bad(format!("bad time {:?}: {e}", fields[0])))?
                .with_timezone(&Utc);
            let mut p = [0.0; 3];
            for (k, f) in fields[1..].iter().enumerate() {
                let v: f64 = f.parse().map_err(|_| bad(format!("bad coordinate {f:?}")))?;
                if !v.is_finite() {
                    return Err(bad(format!("non-finite coordinate {f:?}")));
                }
                p[k] = v;
            }
            if times.last().is_some_and(|&last| t <= last) {
                return Err(EphemerisError::NonMonotone { line });
            }
            times.push(t);
            positions.push(p);
        }
        if times.is_empty() {
            return Err(EphemerisError::Empty);
        }
        Ok(Self { times, positions })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn span(&self) -> (DateTime<Utc>, DateTime<Utc>) {
        (self.times[0], *self.times.last().unwrap())
    }
}

impl Trajectory for Ephemeris {
    fn state_at(&self, t: DateTime<Utc>) -> Result<SatelliteState, OrbitError> {
        let (first, last) = self.span();
        if t < first || t > last {
            return Err(OrbitError::OutsideEphemeris(t));
        }
        let idx = self.times.partition_point(|&x| x <= t);
        // idx >= 1 because t >= first.
        let i = idx - 1;
        if self.times[i] == t || i + 1 == self.times.len() {
            let velocity = self.velocity_near(i);
            return Ok(SatelliteState { time: t, position: self.positions[i], velocity });
        }
        let (a, b) = (self.positions[i], self.positions[i + 1]);
        let span = crate::time::seconds_between(self.times[i], self.times[i + 1]);
        let f = crate::time::seconds_between(self.times[i], t) / span;
        let position = [a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f, a[2] + (b[2] - a[2]) * f];
        let velocity = [(b[0] - a[0]) / span, (b[1] - a[1]) / span, (b[2] - a[2]) / span];
        Ok(SatelliteState { time: t, position, velocity })
    }
}

impl Ephemeris {
    fn velocity_near(&self, i: usize) -> [f64; 3] {
        if self.times.len() < 2 {
            return [0.0; 3];
        }
        let (j, k) = if i + 1 < self.times.len() { (i, i + 1) } else { (i - 1, i) };
        let dt = crate::time::seconds_between(self.times[j], self.times[k]);
        let (a, b) = (self.positions[j], self.positions[k]);
        [(b[0] - a[0]) / dt, (b[1] - a[1]) / dt, (b[2] - a[2]) / dt]
    }
}
