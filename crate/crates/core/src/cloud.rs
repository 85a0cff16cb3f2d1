//! Gridded cloud optical thickness index (0 = clear, 150 = overcast).
//!
//! File format: one header line
//!
//! ```text
//! lat_min lat_max lon_min lon_max lat_step lon_step time_start_iso8601 n_frames n_lat n_lon
//! ```
//!
//! followed by `n_frames` integer matrices of `n_lat` rows by `n_lon`
//! columns, latitude ascending then longitude ascending, all tokens
//! whitespace separated. Frames are 600 s apart.

use chrono::{DateTime, Duration, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

/// Index meaning full blockage.
pub const OVERCAST: u8 = 150;
/// Frame cadence of the grid, seconds.
pub const FRAME_SECONDS: i64 = 600;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CloudError {
    #[error("cloud index {0} outside [0, 150]")]
    IndexRange(i64),
    #[error("cloud header: {0}")]
    Header(String),
    #[error("value {value} at frame {frame}, lat row {row}, lon column {col} is outside [0, 150]")]
    CellRange { frame: usize, row: usize, col: usize, value: i64 },
    #[error("malformed token {token:?} at frame {frame}, lat row {row}, lon column {col}")]
    Token { frame: usize, row: usize, col: usize, token: String },
    #[error("shape mismatch: expected {expected} values, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("query ({lat}, {lon}) is outside the grid")]
    OutOfBounds { lat: f64, lon: f64 },
    #[error("query time {0} is outside the grid frames")]
    OutOfTime(DateTime<Utc>),
    #[error("cannot read cloud grid: {0}")]
    Io(String),
}

/// Attenuation due to cloud cover, dB. `+inf` for full blockage.
pub fn cloud_loss(alpha: u8) -> Result<f64, CloudError> {
    match alpha {
        0 => Ok(0.0),
        a if a < OVERCAST => Ok(-10.0 * ((f64::from(OVERCAST - a)) / f64::from(OVERCAST)).log10()),
        OVERCAST => Ok(f64::INFINITY),
        a => Err(CloudError::IndexRange(i64::from(a))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloudGrid {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
    pub lat_step: f64,
    pub lon_step: f64,
    pub time_start: DateTime<Utc>,
    n_frames: usize,
    n_lat: usize,
    n_lon: usize,
    /// (frame, lat, lon) row-major.
    values: Vec<u8>,
}

impl CloudGrid {
    /// Build a grid from explicit dimensions; the upper bounds are derived.
    pub fn new(
        lat_min: f64,
        lon_min: f64,
        lat_step: f64,
        lon_step: f64,
        time_start: DateTime<Utc>,
        (n_frames, n_lat, n_lon): (usize, usize, usize),
        values: Vec<u8>,
    ) -> Result<Self, CloudError> {
        if !(lat_step > 0.0 && lon_step > 0.0) {
            return Err(CloudError::Header("steps must be positive".into()));
        }
        if n_frames == 0 || n_lat == 0 || n_lon == 0 {
            return Err(CloudError::Header("dimensions must be positive".into()));
        }
        let expected = n_frames * n_lat * n_lon;
        if values.len() != expected {
            return Err(CloudError::Shape { expected, found: values.len() });
        }
        if let Some(pos) = values.iter().position(|&v| v > OVERCAST) {
            let (frame, row, col) = (pos / (n_lat * n_lon), (pos / n_lon) % n_lat, pos % n_lon);
            return Err(CloudError::CellRange { frame, row, col, value: i64::from(values[pos]) });
        }
        Ok(Self {
            lat_min,
            lat_max: lat_min + lat_step * (n_lat - 1) as f64,
            lon_min,
            lon_max: lon_min + lon_step * (n_lon - 1) as f64,
            lat_step,
            lon_step,
            time_start,
            n_frames,
            n_lat,
            n_lon,
            values,
        })
    }

    /// Uniform grid with a single value everywhere.
    pub fn uniform(
        lat: (f64, f64),
        lon: (f64, f64),
        step: f64,
        time_start: DateTime<Utc>,
        n_frames: usize,
        value: u8,
    ) -> Result<Self, CloudError> {
        let n_lat = ((lat.1 - lat.0) / step).round() as usize + 1;
        let n_lon = ((lon.1 - lon.0) / step).round() as usize + 1;
        Self::new(lat.0, lon.0, step, step, time_start, (n_frames, n_lat, n_lon), vec![value; n_frames * n_lat * n_lon])
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_frames, self.n_lat, self.n_lon)
    }

    pub fn time_end(&self) -> DateTime<Utc> {
        self.time_start + Duration::seconds(FRAME_SECONDS * self.n_frames as i64)
    }

    pub fn get(&self, frame: usize, row: usize, col: usize) -> u8 {
        self.values[(frame * self.n_lat + row) * self.n_lon + col]
    }

    pub fn set(&mut self, frame: usize, row: usize, col: usize, value: u8) -> Result<(), CloudError> {
        if value > OVERCAST {
            return Err(CloudError::IndexRange(i64::from(value)));
        }
        let idx = (frame * self.n_lat + row) * self.n_lon + col;
        self.values[idx] = value;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CloudError> {
        let mut lines = text.lines();
        let header =
            lines.by_ref().find(|l| !l.trim().is_empty()).ok_or_else(|| CloudError::Header("missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 10 {
            return Err(CloudError::Header(format!("expected 10 fields, found {}", h.len())));
        }
        let float = |i: usize, name: &str| -> Result<f64, CloudError> {
            h[i].parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CloudError::Header(format!("bad {name} {:?}", h[i])))
        };
        let count = |i: usize, name: &str| -> Result<usize, CloudError> {
            h[i].parse::<usize>().map_err(|_| CloudError::Header(format!("bad {name} {:?}", h[i])))
        };
        let (lat_min, lat_max, lon_min, lon_max) =
            (float(0, "lat_min")?, float(1, "lat_max")?, float(2, "lon_min")?, float(3, "lon_max")?);
        let (lat_step, lon_step) = (float(4, "lat_step")?, float(5, "lon_step")?);
        let time_start = DateTime::parse_from_rfc3339(h[6])
            .map_err(|e| CloudError::Header(format!("bad time_start {:?}: {e}", h[6])))?
            .with_timezone(&Utc);
        let (n_frames, n_lat, n_lon) = (count(7, "n_frames")?, count(8, "n_lat")?, count(9, "n_lon")?);
        if !(lat_step > 0.0 && lon_step > 0.0) {
            return Err(CloudError::Header("steps must be positive".into()));
        }
        if n_frames == 0 || n_lat == 0 || n_lon == 0 {
            return Err(CloudError::Header("dimensions must be positive".into()));
        }
        let tol = 1e-6;
        if ((lat_max - lat_min) - lat_step * (n_lat - 1) as f64).abs() > tol * lat_step.max(1.0)
            || ((lon_max - lon_min) - lon_step * (n_lon - 1) as f64).abs() > tol * lon_step.max(1.0)
        {
            return Err(CloudError::Header("bounds do not match steps and cell counts".into()));
        }
        let expected = n_frames
            .checked_mul(n_lat)
            .and_then(|v| v.checked_mul(n_lon))
            .filter(|&v| v <= 1 << 30)
            .ok_or_else(|| CloudError::Header("grid too large".into()))?;
        let mut values = Vec::with_capacity(expected.min(1 << 20));
        for token in lines.flat_map(str::split_whitespace) {
            let pos = values.len();
            if pos >= expected {
                return Err(CloudError::Shape { expected, found: pos + 1 });
            }
            let (frame, row, col) = (pos / (n_lat * n_lon), (pos / n_lon) % n_lat, pos % n_lon);
            let v: i64 = token.parse().map_err(|_| CloudError::Token { frame, row, col, token: token.to_string() })?;
            if !(0..=i64::from(OVERCAST)).contains(&v) {
                return Err(CloudError::CellRange { frame, row, col, value: v });
            }
            values.push(v as u8);
        }
        if values.len() != expected {
            return Err(CloudError::Shape { expected, found: values.len() });
        }
        let mut grid = Self::new(lat_min, lon_min, lat_step, lon_step, time_start, (n_frames, n_lat, n_lon), values)?;
        grid.lat_max = lat_max;
        grid.lon_max = lon_max;
        Ok(grid)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CloudError> {
        let text = std::fs::read_to_string(path).map_err(|e| CloudError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {} {} {}",
            self.lat_min,
            self.lat_max,
            self.lon_min,
            self.lon_max,
            self.lat_step,
            self.lon_step,
            self.time_start.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            self.n_frames,
            self.n_lat,
            self.n_lon
        );
        for row in self.values.chunks(self.n_lon) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Nearest-cell row/column for a point; exact midpoints go to the lower index.
    pub fn cell_of(&self, lat: f64, lon: f64) -> Result<(usize, usize), CloudError> {
        let oob = || CloudError::OutOfBounds { lat, lon };
        if !(lat >= self.lat_min && lat <= self.lat_max && lon >= self.lon_min && lon <= self.lon_max) {
            return Err(oob());
        }
        let row = ((lat - self.lat_min) / self.lat_step - 0.5).ceil().max(0.0) as usize;
        let col = ((lon - self.lon_min) / self.lon_step - 0.5).ceil().max(0.0) as usize;
        Ok((row.min(self.n_lat - 1), col.min(self.n_lon - 1)))
    }

    /// Frame containing `t` (floor to the 10-minute bucket).
    pub fn frame_of(&self, t: DateTime<Utc>) -> Result<usize, CloudError> {
        if t < self.time_start {
            return Err(CloudError::OutOfTime(t));
        }
        let offset = (t - self.time_start).num_milliseconds().div_euclid(1000);
        let frame = (offset / FRAME_SECONDS) as usize;
        if frame >= self.n_frames {
            return Err(CloudError::OutOfTime(t));
        }
        Ok(frame)
    }

    pub fn query(&self, lat: f64, lon: f64, t: DateTime<Utc>) -> Result<u8, CloudError> {
        let (row, col) = self.cell_of(lat, lon)?;
        let frame = self.frame_of(t)?;
        Ok(self.get(frame, row, col))
    }
}

/// Parameters for a synthetic cloud field made of drifting Gaussian blobs.
#[derive(Debug, Clone)]
pub struct SyntheticClouds {
    pub lat: (f64, f64),
    pub lon: (f64, f64),
    pub step: f64,
    pub time_start: DateTime<Utc>,
    pub n_frames: usize,
    pub blobs: usize,
    /// Blob radius, degrees.
    pub radius: f64,
    /// Peak index of a blob (clamped to 150).
    pub peak: f64,
    /// Drift per frame, degrees of longitude.
    pub drift: f64,
    pub seed: u64,
}

impl SyntheticClouds {
    pub fn generate(&self) -> Result<CloudGrid, CloudError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n_lat = ((self.lat.1 - self.lat.0) / self.step).round() as usize + 1;
        let n_lon = ((self.lon.1 - self.lon.0) / self.step).round() as usize + 1;
        let blobs: Vec<(f64, f64, f64)> = (0..self.blobs)
            .map(|_| {
                (
                    rng.gen_range(self.lat.0..=self.lat.1),
                    rng.gen_range(self.lon.0..=self.lon.1),
                    rng.gen_range(0.3..=1.0),
                )
            })
            .collect();
        let span_lon = self.lon.1 - self.lon.0;
        let two_r2 = 2.0 * self.radius * self.radius;
        // Each blob is separable into latitude and longitude factors.
        let lat_factors: Vec<Vec<f64>> = blobs
            .iter()
            .map(|&(blat, _, amp)| {
                (0..n_lat)
                    .map(|r| {
                        let lat = self.lat.0 + r as f64 * self.step;
                        amp * self.peak * (-(lat - blat).powi(2) / two_r2).exp()
                    })
                    .collect()
            })
            .collect();
        let mut lon_factors = vec![0.0; self.blobs * n_lon];
        let mut values = Vec::with_capacity(self.n_frames * n_lat * n_lon);
        for f in 0..self.n_frames {
            for (b, &(_, blon, _)) in blobs.iter().enumerate() {
                let clon =
                    self.lon.0 + (blon - self.lon.0 + self.drift * f as f64).rem_euclid(span_lon.max(f64::EPSILON));
                for c in 0..n_lon {
                    let lon = self.lon.0 + c as f64 * self.step;
                    lon_factors[b * n_lon + c] = (-(lon - clon).powi(2) / two_r2).exp();
                }
            }
            for r in 0..n_lat {
                for c in 0..n_lon {
                    let mut v = 0.0;
                    for (b, lf) in lat_factors.iter().enumerate() {
                        v += lf[r] * lon_factors[b * n_lon + c];
                    }
                    values.push(v.round().clamp(0.0, f64::from(OVERCAST)) as u8);
                }
            }
        }
        CloudGrid::new(
            self.lat.0,
            self.lon.0,
            self.step,
            self.step,
            self.time_start,
            (self.n_frames, n_lat, n_lon),
            values,
        )
    }
}
