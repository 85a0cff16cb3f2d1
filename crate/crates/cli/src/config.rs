//! Scenario configuration (TOML) and its resolution into model inputs.

use crate::error::CliError;
use chrono::{DateTime, Duration, Utc};
use satqkd::cloud::{CloudGrid, SyntheticClouds};
use satqkd::orbit::{parse_tle, AccessConfig, Ephemeris, GroundStation, NightPredicate, Propagator, TleElements};
use satqkd::qkd::{KeyGrid, QkdParams};
use satqkd::sched::{StrategyConfig, StrategyKind};
use satqkd::{OpticalParams, Trajectory};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    /// `[start, end)` in RFC 3339.
    pub span: [String; 2],
    #[serde(default = "default_step")]
    pub step_seconds: u32,
    #[serde(default = "default_step")]
    pub interval_seconds: u32,
    #[serde(default = "default_mask")]
    pub elevation_mask_deg: f64,
    #[serde(default)]
    pub night: NightConfig,
    pub satellite: SatelliteConfig,
    #[serde(default)]
    pub stations_file: Option<PathBuf>,
    #[serde(default)]
    pub stations: Vec<GroundStation>,
    #[serde(default)]
    pub optics: OpticalParams,
    #[serde(default)]
    pub qkd: QkdParams,
    #[serde(default)]
    pub cloud: Option<CloudConfig>,
    #[serde(default)]
    pub strategies: Vec<StrategyConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
}

fn default_step() -> u32 {
    10
}

fn default_mask() -> f64 {
    10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NightConfig {
    #[serde(default = "default_true")]
    pub enabled: bool,
    #[serde(default = "default_sun_limit")]
    pub max_sun_elevation_deg: f64,
    #[serde(default)]
    pub require_umbra: bool,
}

fn default_true() -> bool {
    true
}

fn default_sun_limit() -> f64 {
    -6.0
}

impl Default for NightConfig {
    fn default() -> Self {
        Self { enabled: true, max_sun_elevation_deg: default_sun_limit(), require_umbra: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteConfig {
    /// Path to a two-line element file.
    #[serde(default)]
    pub tle_file: Option<PathBuf>,
    /// Inline two-line elements.
    #[serde(default)]
    pub tle: Option<String>,
    /// Precomputed inertial ephemeris; replaces propagation when present.
    #[serde(default)]
    pub ephemeris_file: Option<PathBuf>,
    /// Include J2 secular drift.
    #[serde(default = "default_true")]
    pub j2: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudConfig {
    #[serde(default)]
    pub file: Option<PathBuf>,
    /// Same index everywhere, for every frame covering the span.
    #[serde(default)]
    pub uniform: Option<u8>,
    #[serde(default)]
    pub synthetic: Option<SyntheticCloudConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticCloudConfig {
    pub lat: [f64; 2],
    pub lon: [f64; 2],
    #[serde(default = "default_cloud_step")]
    pub step_deg: f64,
    #[serde(default = "default_blobs")]
    pub blobs: usize,
    #[serde(default = "default_radius")]
    pub radius_deg: f64,
    #[serde(default = "default_peak")]
    pub peak: f64,
    #[serde(default)]
    pub drift_deg_per_frame: f64,
    /// Defaults to the scenario seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_cloud_step() -> f64 {
    0.5
}

fn default_blobs() -> usize {
    12
}

fn default_radius() -> f64 {
    3.0
}

fn default_peak() -> f64 {
    120.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOrbit {
    pub altitude_km: f64,
    /// Replaces the base right ascension of the ascending node, degrees.
    #[serde(default)]
    pub raan_deg: Option<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_orbits")]
    pub orbits: Vec<SweepOrbit>,
    #[serde(default = "default_divergences")]
    pub divergences_urad: Vec<f64>,
}

fn default_orbits() -> Vec<SweepOrbit> {
    let orbit = |alt: f64, label: &str, raan: Option<f64>| SweepOrbit {
        altitude_km: alt,
        raan_deg: raan,
        label: Some(label.into()),
    };
    vec![
        orbit(500.0, "LEO", None),
        orbit(2500.0, "MEO1", None),
        orbit(5000.0, "MEO2", None),
        orbit(35863.0, "GEO", Some(50.0591)),
    ]
}

fn default_divergences() -> Vec<f64> {
    vec![1.0, 3.0, 5.0, 10.0]
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { orbits: default_orbits(), divergences_urad: default_divergences() }
    }
}

/// Station file: a TOML document holding `[[stations]]` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationFile {
    pub stations: Vec<GroundStation>,
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::config("", e.message().trim().to_string()).at_span(text, e.span()))
}

pub fn parse_station_file(text: &str) -> Result<Vec<GroundStation>, CliError> {
    let f: StationFile = toml::from_str(text)
        .map_err(|e| CliError::config("stations_file", e.message().trim().to_string()).at_span(text, e.span()))?;
    check_station_names(&f.stations)?;
    Ok(f.stations)
}

fn parse_time(field: &str, s: &str) -> Result<DateTime<Utc>, CliError> {
    let t = DateTime::parse_from_rfc3339(s)
        .map_err(|e| CliError::config(field, format!("invalid RFC 3339 time {s:?}: {e}")))?
        .with_timezone(&Utc);
    if t.timestamp_subsec_nanos() != 0 {
        return Err(CliError::config(field, "times must be whole seconds"));
    }
    Ok(t)
}

/// Station names end up in CSV cells and schedule activities.
fn check_station_names(stations: &[GroundStation]) -> Result<(), CliError> {
    for (i, s) in stations.iter().enumerate() {
        let field = format!("stations[{i}].name");
        if s.name.trim().is_empty() || s.name != s.name.trim() {
            return Err(CliError::config(&field, "name must be non-empty without surrounding spaces"));
        }
        if s.name.chars().any(|c| c == ',' || c == '"' || c.is_control()) {
            return Err(CliError::config(&field, "name must not contain commas, quotes or control characters"));
        }
        if ["IDLE", "SWITCH", "ALL"].contains(&s.name.as_str()) {
            return Err(CliError::config(&field, format!("{:?} is reserved", s.name)));
        }
        if stations[..i].iter().any(|o| o.name == s.name) {
            return Err(CliError::config(&field, format!("duplicate station {:?}", s.name)));
        }
        s.validate().map_err(|e| CliError::config(&format!("stations[{i}]"), e.to_string()))?;
    }
    Ok(())
}

/// A validated scenario with every referenced input loaded.
pub struct Scenario {
    pub config: ScenarioConfig,
    /// SHA-256 of the configuration text and of each referenced file, in load order.
    pub input_hashes: Vec<(String, String)>,
    pub seed: u64,
    pub span: (DateTime<Utc>, DateTime<Utc>),
    pub tle: Option<TleElements>,
    pub trajectory: Box<dyn Trajectory>,
    pub stations: Vec<GroundStation>,
    pub cloud: Option<CloudGrid>,
    pub access: AccessConfig,
    pub grid: KeyGrid,
    pub strategies: Vec<StrategyConfig>,
    pub warnings: Vec<String>,
}

fn read(base: &Path, rel: &Path, field: &str, hashes: &mut Vec<(String, String)>) -> Result<String, CliError> {
    let path = base.join(rel);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    hashes.push((field.to_string(), crate::output::sha256_hex(text.as_bytes())));
    Ok(text)
}

impl Scenario {
    pub fn load(path: &Path, seed: Option<u64>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_text(&text, base, seed)
    }

    pub fn from_text(text: &str, base: &Path, seed: Option<u64>) -> Result<Self, CliError> {
        let config = parse_config(text)?;
        let mut hashes = vec![("config".to_string(), crate::output::sha256_hex(text.as_bytes()))];
        Self::resolve(config, base, seed, &mut hashes).map(|mut s| {
            s.input_hashes = hashes;
            s
        })
    }

    fn resolve(
        config: ScenarioConfig,
        base: &Path,
        seed: Option<u64>,
        hashes: &mut Vec<(String, String)>,
    ) -> Result<Self, CliError> {
        let mut warnings = Vec::new();
        let span = (parse_time("span[0]", &config.span[0])?, parse_time("span[1]", &config.span[1])?);
        if span.1 <= span.0 {
            return Err(CliError::config("span", "end must be after start"));
        }
        if config.step_seconds == 0 {
            return Err(CliError::config("step_seconds", "must be positive"));
        }
        if config.interval_seconds == 0 || !config.interval_seconds.is_multiple_of(config.step_seconds) {
            return Err(CliError::config("step_seconds", "must divide interval_seconds"));
        }
        if !(-90.0..90.0).contains(&config.elevation_mask_deg) {
            return Err(CliError::config("elevation_mask_deg", "must lie in [-90, 90)"));
        }
        if !config.night.max_sun_elevation_deg.is_finite() {
            return Err(CliError::config("night.max_sun_elevation_deg", "must be finite"));
        }
        config.optics.validate().map_err(|e| CliError::config("optics", e.to_string()))?;
        config.qkd.validate().map_err(|e| CliError::config("qkd", e.to_string()))?;

        let sat = &config.satellite;
        let tle_text = match (&sat.tle_file, &sat.tle) {
            (Some(_), Some(_)) => return Err(CliError::config("satellite", "give either tle_file or tle, not both")),
            (Some(p), None) => Some(read(base, p, "satellite.tle_file", hashes)?),
            (None, Some(t)) => Some(t.clone()),
            (None, None) => None,
        };
        let tle = match tle_text {
            Some(t) => Some(parse_tle(&t).map_err(|e| CliError::input("satellite.tle", e.to_string()))?),
            None => None,
        };
        let trajectory: Box<dyn Trajectory> = match (&sat.ephemeris_file, &tle) {
            (Some(p), _) => {
                let text = read(base, p, "satellite.ephemeris_file", hashes)?;
                Box::new(
                    Ephemeris::parse_csv(&text)
                        .map_err(|e| CliError::input("satellite.ephemeris_file", e.to_string()))?,
                )
            }
            (None, Some(t)) => {
                let prop = if sat.j2 { Propagator::new(t) } else { Propagator::two_body(t) };
                Box::new(prop.map_err(|e| CliError::config("satellite.tle", e.to_string()))?)
            }
            (None, None) => return Err(CliError::config("satellite", "needs tle_file, tle or ephemeris_file")),
        };
        if let Some(t) = &tle {
            let age = (span.0 - t.epoch).num_days().abs().max((span.1 - t.epoch).num_days().abs());
            if age > 30 {
                warnings
                    .push(format!("TLE epoch {} is {age} days from the simulated span; accuracy degrades", t.epoch));
            }
        }

        let mut stations = config.stations.clone();
        if let Some(p) = &config.stations_file {
            if !stations.is_empty() {
                return Err(CliError::config("stations_file", "give either stations_file or [[stations]], not both"));
            }
            stations = parse_station_file(&read(base, p, "stations_file", hashes)?)?;
        }
        check_station_names(&stations)?;

        let interval = Duration::seconds(i64::from(config.interval_seconds));
        let total = (span.1 - span.0).num_seconds();
        let intervals = ((total + interval.num_seconds() - 1) / interval.num_seconds()) as usize;
        let grid = KeyGrid { start: span.0, intervals, interval_seconds: config.interval_seconds };

        let seed = seed.unwrap_or(config.seed);
        let cloud = match &config.cloud {
            None => None,
            Some(c) => Some(load_cloud(c, base, span, seed, hashes)?),
        };

        let night = config.night.enabled.then_some(NightPredicate {
            max_sun_elevation_deg: config.night.max_sun_elevation_deg,
            require_umbra: config.night.require_umbra,
        });
        let access =
            AccessConfig { step_seconds: config.step_seconds, elevation_mask_deg: config.elevation_mask_deg, night };

        let strategies = resolve_strategies(&config.strategies, &stations, seed)?;

        for (i, o) in config.sweep.orbits.iter().enumerate() {
            if !(o.altitude_km > 0.0 && o.altitude_km.is_finite()) {
                return Err(CliError::config(&format!("sweep.orbits[{i}].altitude_km"), "must be positive"));
            }
        }
        for (i, d) in config.sweep.divergences_urad.iter().enumerate() {
            if !(*d > 0.0 && d.is_finite()) {
                return Err(CliError::config(&format!("sweep.divergences_urad[{i}]"), "must be positive"));
            }
        }

        Ok(Self {
            config,
            input_hashes: Vec::new(),
            seed,
            span,
            tle,
            trajectory,
            stations,
            cloud,
            access,
            grid,
            strategies,
            warnings,
        })
    }
}

fn load_cloud(
    c: &CloudConfig,
    base: &Path,
    span: (DateTime<Utc>, DateTime<Utc>),
    seed: u64,
    hashes: &mut Vec<(String, String)>,
) -> Result<CloudGrid, CliError> {
    let frames = ((span.1 - span.0).num_seconds() as usize).div_ceil(satqkd::cloud::FRAME_SECONDS as usize);
    match (&c.file, c.uniform, &c.synthetic) {
        (Some(p), None, None) => {
            let text = read(base, p, "cloud.file", hashes)?;
            CloudGrid::parse(&text).map_err(|e| CliError::input("cloud.file", e.to_string()))
        }
        (None, Some(v), None) => CloudGrid::uniform((-90.0, 90.0), (-180.0, 180.0), 1.0, span.0, frames, v)
            .map_err(|e| CliError::config("cloud.uniform", e.to_string())),
        (None, None, Some(s)) => {
            if !(s.step_deg > 0.0 && s.radius_deg > 0.0 && s.lat[0] < s.lat[1] && s.lon[0] < s.lon[1]) {
                return Err(CliError::config(
                    "cloud.synthetic",
                    "needs increasing bounds and positive step and radius",
                ));
            }
            SyntheticClouds {
                lat: (s.lat[0], s.lat[1]),
                lon: (s.lon[0], s.lon[1]),
                step: s.step_deg,
                time_start: span.0,
                n_frames: frames,
                blobs: s.blobs,
                radius: s.radius_deg,
                peak: s.peak,
                drift: s.drift_deg_per_frame,
                seed: s.seed.unwrap_or(seed),
            }
            .generate()
            .map_err(|e| CliError::config("cloud.synthetic", e.to_string()))
        }
        _ => Err(CliError::config("cloud", "give exactly one of file, uniform or synthetic")),
    }
}

/// Strategies to run; weights default to the station weights and the GA seed
/// to the scenario seed.
fn resolve_strategies(
    given: &[StrategyConfig],
    stations: &[GroundStation],
    seed: u64,
) -> Result<Vec<StrategyConfig>, CliError> {
    let mut out: Vec<StrategyConfig> = if given.is_empty() {
        [StrategyKind::GeneralDelivery, StrategyKind::PrioritizedDelivery, StrategyKind::TargetedDelivery]
            .into_iter()
            .map(StrategyConfig::new)
            .collect()
    } else {
        given.to_vec()
    };
    for (i, s) in out.iter_mut().enumerate() {
        if s.weights.is_empty() && s.kind != StrategyKind::GeneralDelivery {
            s.weights = stations.iter().map(|st| st.weight).collect();
        }
        s.ga.seed = seed;
        if !stations.is_empty() {
            s.validate().map_err(|e| CliError::config(&format!("strategies[{i}]"), e.to_string()))?;
            if !s.weights.is_empty() && s.weights.len() != stations.len() {
                return Err(CliError::config(
                    &format!("strategies[{i}].weights"),
                    format!("expected {} weights, found {}", stations.len(), s.weights.len()),
                ));
            }
        }
    }
    Ok(out)
}

impl Scenario {
    /// Elements for the sweep orbit, derived from the scenario TLE.
    pub fn sweep_elements(&self, orbit: &SweepOrbit) -> Result<TleElements, CliError> {
        let tle = self.tle.as_ref().ok_or_else(|| CliError::config("satellite", "sweeps need two-line elements"))?;
        let mut e = tle.with_altitude(orbit.altitude_km);
        if let Some(r) = orbit.raan_deg {
            e.raan = r;
        }
        Ok(e)
    }
}
