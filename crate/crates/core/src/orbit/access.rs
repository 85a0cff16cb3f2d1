use super::geometry::{look_angles, topocentre};
use super::sun::{in_earth_shadow, sun_direction_eci};
use super::{dot, GroundStation, LookAngles, OrbitError, Trajectory};
use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};

/// Night-time gating applied to every sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NightPredicate {
    /// The station counts as dark when the Sun is below this elevation.
    #[serde(default = "default_sun_limit")]
    pub max_sun_elevation_deg: f64,
    /// Also require the satellite to be inside the Earth's shadow cylinder.
    #[serde(default)]
    pub require_umbra: bool,
}

fn default_sun_limit() -> f64 {
    -6.0
}

impl Default for NightPredicate {
    fn default() -> Self {
        Self { max_sun_elevation_deg: default_sun_limit(), require_umbra: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessConfig {
    pub step_seconds: u32,
    /// Samples must be strictly above this elevation.
    pub elevation_mask_deg: f64,
    /// `None` disables night-time gating.
    pub night: Option<NightPredicate>,
}

impl Default for AccessConfig {
    fn default() -> Self {
        Self { step_seconds: 10, elevation_mask_deg: 10.0, night: Some(NightPredicate::default()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessSample {
    pub time: DateTime<Utc>,
    pub look: LookAngles,
}

/// A maximal run of usable samples for one station.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessInterval {
    /// Index into the station list the interval was computed for.
    pub station: usize,
    /// Time of the first sample.
    pub start: DateTime<Utc>,
    /// Time of the last sample plus one step.
    pub end: DateTime<Utc>,
    pub step_seconds: u32,
    pub samples: Vec<AccessSample>,
}

impl AccessInterval {
    pub fn duration_seconds(&self) -> i64 {
        (self.end - self.start).num_seconds()
    }
}

/// Sample `[span.0, span.1)` every `step_seconds` and return the access
/// intervals of all stations, ordered by start time then station index.
///
/// Passes cut by the span boundary are truncated, not dropped.
pub fn compute_access_windows<T: Trajectory + ?Sized>(
    trajectory: &T,
    stations: &[GroundStation],
    span: (DateTime<Utc>, DateTime<Utc>),
    cfg: &AccessConfig,
) -> Result<Vec<AccessInterval>, OrbitError> {
    if cfg.step_seconds == 0 {
        return Err(OrbitError::Config("step must be positive".into()));
    }
    if span.1 <= span.0 {
        return Err(OrbitError::Config("time span is empty".into()));
    }
    for s in stations {
        s.validate()?;
    }
    let step = Duration::seconds(i64::from(cfg.step_seconds));
    let mut open: Vec<Option<AccessInterval>> = vec![None; stations.len()];
    let mut done = Vec::new();

    let mut t = span.0;
    while t < span.1 {
        let state = trajectory.state_at(t)?;
        let needs_sun = cfg.night.is_some();
        let sun = if needs_sun { sun_direction_eci(t) } else { [0.0; 3] };
        let umbra_ok = match cfg.night {
            Some(n) if n.require_umbra => in_earth_shadow(state.position, t),
            _ => true,
        };
        for (idx, station) in stations.iter().enumerate() {
            let look = look_angles(&state, station, t);
            let mut usable = look.elevation > cfg.elevation_mask_deg && umbra_ok;
            if usable {
                if let Some(n) = cfg.night {
                    let up = topocentre(station, t).up;
                    let sun_el = dot(sun, up).clamp(-1.0, 1.0).asin().to_degrees();
                    usable = sun_el < n.max_sun_elevation_deg;
                }
            }
            let slot = &mut open[idx];
            if usable {
                let iv = slot.get_or_insert_with(|| AccessInterval {
                    station: idx,
                    start: t,
                    end: t,
                    step_seconds: cfg.step_seconds,
                    samples: Vec::new(),
                });
                iv.samples.push(AccessSample { time: t, look });
                iv.end = t + step;
            } else if let Some(iv) = slot.take() {
                done.push(iv);
            }
        }
        t += step;
    }
    done.extend(open.into_iter().flatten());
    done.sort_by(|a, b| a.start.cmp(&b.start).then(a.station.cmp(&b.station)));
    Ok(done)
}

/// Seconds during which at least one station has access.
pub fn union_duration(intervals: &[AccessInterval]) -> i64 {
    let mut spans: Vec<(DateTime<Utc>, DateTime<Utc>)> = intervals.iter().map(|i| (i.start, i.end)).collect();
    spans.sort();
    let mut total = 0;
    let mut current: Option<(DateTime<Utc>, DateTime<Utc>)> = None;
    for (s, e) in spans {
        match current {
            Some((cs, ce)) if s <= ce => current = Some((cs, ce.max(e))),
            Some((cs, ce)) => {
                total += (ce - cs).num_seconds();
                current = Some((s, e));
            }
            None => current = Some((s, e)),
        }
    }
    if let Some((cs, ce)) = current {
        total += (ce - cs).num_seconds();
    }
    total
}
