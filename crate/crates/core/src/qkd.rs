//! Asymptotic decoy-state BB84 key rates (GLLP with vacuum + weak decoy
//! bounds) and the interval-by-node key matrix used by the scheduler.

use crate::channel::{ChannelError, LinkSample, OpticalParams};
use crate::cloud::{CloudError, CloudGrid};
use crate::orbit::{AccessInterval, GroundStation};
use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QkdError {
    #[error("invalid QKD parameter: {0}")]
    Params(String),
    #[error("decoy bound needs nu < mu (mu*nu - nu^2 = {0})")]
    DecoyDenominator(f64),
    #[error("decoy bound assumes a vacuum third state (omega = 0), got {0}")]
    NonVacuumDecoy(f64),
    #[error("sample at {time} is not aligned to the {step} s key grid starting {start}")]
    GridMisaligned { time: DateTime<Utc>, start: DateTime<Utc>, step: u32 },
    #[error("sample at {0} is outside the key grid")]
    OutsideGrid(DateTime<Utc>),
    #[error("station index {0} out of range")]
    Station(usize),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Cloud(#[from] CloudError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QkdParams {
    /// Signal mean photon number.
    pub mu: f64,
    /// Weak decoy mean photon number.
    pub nu: f64,
    /// Vacuum decoy mean photon number.
    pub omega: f64,
    pub rep_rate_hz: f64,
    /// Sifting factor (0.5 for standard BB84).
    pub q_factor: f64,
    /// Error-correction inefficiency.
    pub f_e: f64,
    /// Misalignment error probability.
    pub e_detector: f64,
    /// Background yield per pulse.
    pub y0: f64,
    /// Error probability of background counts.
    pub e0: f64,
}

impl Default for QkdParams {
    fn default() -> Self {
        Self {
            mu: 0.5,
            nu: 0.08,
            omega: 0.0,
            rep_rate_hz: 2e8,
            q_factor: 0.5,
            f_e: 1.16,
            e_detector: 0.015,
            y0: 3e-6,
            e0: 0.5,
        }
    }
}

impl QkdParams {
    pub fn validate(&self) -> Result<(), QkdError> {
        let bad = |m: &str| Err(QkdError::Params(m.into()));
        if !(0.0 <= self.omega && self.omega < self.nu && self.nu < self.mu && self.mu.is_finite()) {
            return bad("intensities must satisfy 0 <= omega < nu < mu");
        }
        if !(self.q_factor > 0.0 && self.q_factor <= 1.0) {
            return bad("q_factor must lie in (0, 1]");
        }
        if !(self.f_e >= 1.0 && self.f_e.is_finite()) {
            return bad("f_e must be >= 1");
        }
        if !(self.rep_rate_hz > 0.0 && self.rep_rate_hz.is_finite()) {
            return bad("rep_rate_hz must be positive");
        }
        for (name, v) in [("e_detector", self.e_detector), ("y0", self.y0), ("e0", self.e0)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(QkdError::Params(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Binary entropy in bits; h2(0) = h2(1) = 0.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    if x == 0.5 {
        return 1.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Gain and QBER of intensity `mu_i` through transmittance `eta`.
pub fn gain_and_qber(mu_i: f64, eta: f64, params: &QkdParams) -> (f64, f64) {
    let detect = -(-eta * mu_i).exp_m1();
    let gain = params.y0 + detect;
    if gain <= 0.0 {
        return (0.0, params.e0);
    }
    let qber = (params.e0 * params.y0 + params.e_detector * detect) / gain;
    (gain, qber)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoyBounds {
    pub y1_lower: f64,
    pub q1: f64,
    pub e1_upper: f64,
}

/// Vacuum + weak decoy lower bound on the single-photon yield and upper
/// bound on its error rate.
pub fn decoy_estimate(params: &QkdParams, eta: f64) -> Result<DecoyBounds, QkdError> {
    if params.omega != 0.0 {
        return Err(QkdError::NonVacuumDecoy(params.omega));
    }
    let (mu, nu) = (params.mu, params.nu);
    let denom = mu * nu - nu * nu;
    if !(denom > 0.0) {
        return Err(QkdError::DecoyDenominator(denom));
    }
    let (q_mu, _) = gain_and_qber(mu, eta, params);
    let (q_nu, e_nu) = gain_and_qber(nu, eta, params);
    let y0 = params.y0;
    let y1 =
        mu / denom * (q_nu * nu.exp() - q_mu * mu.exp() * (nu * nu) / (mu * mu) - (mu * mu - nu * nu) / (mu * mu) * y0);
    let y1_lower = y1.clamp(0.0, 1.0);
    let q1 = y1_lower * mu * (-mu).exp();
    let e1_upper = if y1_lower > 0.0 {
        ((e_nu * q_nu * nu.exp() - params.e0 * y0) / (y1_lower * nu)).clamp(0.0, 1.0)
    } else {
        // No single-photon evidence: worst case.
        0.5
    };
    Ok(DecoyBounds { y1_lower, q1, e1_upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub q_mu: f64,
    pub e_mu: f64,
    pub y1_lower: f64,
    pub q1: f64,
    pub e1_upper: f64,
    /// Secure bits per emitted pulse, sifting factor included, clamped at 0.
    pub rate_per_pulse: f64,
    pub rate_per_second: f64,
}

/// GLLP asymptotic key rate at transmittance `eta`.
///
/// Degenerate parameters yield a zero rate rather than an error.
pub fn gllp_rate(eta: f64, params: &QkdParams) -> RateResult {
    let eta = if eta.is_nan() { 0.0 } else { eta.clamp(0.0, 1.0) };
    let (q_mu, e_mu) = gain_and_qber(params.mu, eta, params);
    let bounds = decoy_estimate(params, eta).unwrap_or(DecoyBounds { y1_lower: 0.0, q1: 0.0, e1_upper: 0.5 });
    let single = if bounds.e1_upper >= 0.5 { 0.0 } else { bounds.q1 * (1.0 - binary_entropy(bounds.e1_upper)) };
    let bracket = -params.f_e * q_mu * binary_entropy(e_mu) + single;
    let rate_per_pulse = (params.q_factor * bracket).max(0.0);
    RateResult {
        q_mu,
        e_mu,
        y1_lower: bounds.y1_lower,
        q1: bounds.q1,
        e1_upper: bounds.e1_upper,
        rate_per_pulse,
        rate_per_second: rate_per_pulse * params.rep_rate_hz,
    }
}

/// Secure bits accumulated over a time-ordered series sampled every `step_seconds`.
pub fn keys_over_interval(samples: &[LinkSample], step_seconds: f64, params: &QkdParams) -> f64 {
    let mut total = 0.0;
    for s in samples {
        total += gllp_rate(s.loss.transmittance, params).rate_per_second * step_seconds;
    }
    total
}

/// Scheduling time grid: `intervals` slots of `interval_seconds` from `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyGrid {
    pub start: DateTime<Utc>,
    pub intervals: usize,
    pub interval_seconds: u32,
}

impl KeyGrid {
    pub fn interval_start(&self, m: usize) -> DateTime<Utc> {
        self.start + Duration::seconds(i64::from(self.interval_seconds) * m as i64)
    }
}

/// Secure bits obtainable by each node in each scheduling interval.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyMatrix {
    pub grid: KeyGrid,
    pub node_names: Vec<String>,
    /// Row-major `[interval][node]`.
    values: Vec<f64>,
}

impl KeyMatrix {
    pub fn zeros(grid: KeyGrid, node_names: Vec<String>) -> Self {
        let values = vec![0.0; grid.intervals * node_names.len()];
        Self { grid, node_names, values }
    }

    /// Matrix from explicit rows (interval-major), on a 10 s grid at the Unix epoch.
    ///
    /// # Panics
    /// If rows have different lengths or contain negative or non-finite values.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.first().map_or(0, Vec::len);
        let names = (1..=n).map(|i| format!("node{i}")).collect();
        let grid = KeyGrid { start: DateTime::<Utc>::UNIX_EPOCH, intervals: rows.len(), interval_seconds: 10 };
        let mut k = Self::zeros(grid, names);
        for (m, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged key matrix rows");
            for (j, &v) in row.iter().enumerate() {
                assert!(v >= 0.0 && v.is_finite(), "key values must be finite and non-negative");
                k.values[m * n + j] = v;
            }
        }
        k
    }

    pub fn n_nodes(&self) -> usize {
        self.node_names.len()
    }

    pub fn n_intervals(&self) -> usize {
        self.grid.intervals
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.values[m * self.n_nodes() + n]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        let n = self.n_nodes();
        &self.values[m * n..(m + 1) * n]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    /// Total bits per node over the whole horizon.
    pub fn node_totals(&self) -> Vec<f64> {
        let n = self.n_nodes();
        let mut out = vec![0.0; n];
        for row in self.values.chunks(n.max(1)) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }
}

/// A transmittance observation for one station, the input of key accumulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSample {
    pub station: usize,
    pub time: DateTime<Utc>,
    pub eta: f64,
}

/// Accumulate rate x step into the key grid.
///
/// Samples are processed per station in time order, so the result does not
/// depend on the input order.
pub fn accumulate_keys(
    samples: &[EtaSample],
    step_seconds: u32,
    node_names: Vec<String>,
    grid: KeyGrid,
    params: &QkdParams,
) -> Result<KeyMatrix, QkdError> {
    params.validate()?;
    if step_seconds == 0 || !grid.interval_seconds.is_multiple_of(step_seconds) {
        return Err(QkdError::GridMisaligned { time: grid.start, start: grid.start, step: step_seconds });
    }
    let n = node_names.len();
    let mut k = KeyMatrix::zeros(grid, node_names);
    let mut ordered: Vec<&EtaSample> = samples.iter().collect();
    ordered.sort_by(|a, b| a.station.cmp(&b.station).then(a.time.cmp(&b.time)));
    let dt = f64::from(step_seconds);
    for s in ordered {
        if s.station >= n {
            return Err(QkdError::Station(s.station));
        }
        let offset = s.time - grid.start;
        if offset < Duration::zero() {
            return Err(QkdError::OutsideGrid(s.time));
        }
        if offset.subsec_nanos() != 0 || offset.num_seconds() % i64::from(step_seconds) != 0 {
            return Err(QkdError::GridMisaligned { time: s.time, start: grid.start, step: step_seconds });
        }
        let m = (offset.num_seconds() / i64::from(grid.interval_seconds)) as usize;
        if m >= grid.intervals {
            return Err(QkdError::OutsideGrid(s.time));
        }
        k.values[m * n + s.station] += gllp_rate(s.eta, params).rate_per_second * dt;
    }
    Ok(k)
}

/// Link samples (with per-sample cloud lookups) for every access interval.
pub fn link_samples(
    accesses: &[AccessInterval],
    stations: &[GroundStation],
    cloud: Option<&CloudGrid>,
    optics: &OpticalParams,
) -> Result<Vec<(usize, LinkSample)>, QkdError> {
    optics.validate()?;
    let mut out = Vec::new();
    for iv in accesses {
        let st = stations.get(iv.station).ok_or(QkdError::Station(iv.station))?;
        for s in &iv.samples {
            let alpha = match cloud {
                Some(g) => g.query(st.latitude, st.longitude, s.time)?,
                None => 0,
            };
            out.push((iv.station, LinkSample::new(s.time, s.look, alpha, optics)?));
        }
    }
    Ok(out)
}

/// Key matrix on `grid` for the given access intervals.
pub fn build_key_matrix(
    accesses: &[AccessInterval],
    stations: &[GroundStation],
    cloud: Option<&CloudGrid>,
    optics: &OpticalParams,
    params: &QkdParams,
    grid: KeyGrid,
) -> Result<KeyMatrix, QkdError> {
    let step = accesses.first().map_or(grid.interval_seconds, |a| a.step_seconds);
    if accesses.iter().any(|a| a.step_seconds != step) {
        return Err(QkdError::GridMisaligned { time: grid.start, start: grid.start, step });
    }
    let samples: Vec<EtaSample> = link_samples(accesses, stations, cloud, optics)?
        .into_iter()
        .map(|(station, s)| EtaSample { station, time: s.time, eta: s.loss.transmittance })
        .collect();
    let names = stations.iter().map(|s| s.name.clone()).collect();
    accumulate_keys(&samples, step, names, grid, params)
}
