//! Single-satellite, multi-station downlink scheduling on the key matrix.
//!
//! Each scheduling interval is idle, spent retargeting (`Switch`), or
//! assigned to one node. A node may only be served if the previous interval
//! served the same node, or the previous `k` intervals were all switching.
//! The first assignment of the horizon needs no preceding switch.

mod exact;
mod ga;

pub use exact::{solve_exact, solve_greedy};
pub use ga::{solve_ga, GaConfig};

use crate::qkd::KeyMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchedError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error("invalid strategy configuration: {0}")]
    Config(String),
    #[error("no keys delivered; distribution undefined")]
    EmptyDelivery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Activity {
    Idle,
    Switch,
    Node(usize),
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activity::Idle => f.write_str("IDLE"),
            Activity::Switch => f.write_str("SWITCH"),
            Activity::Node(n) => write!(f, "node{}", n + 1),
        }
    }
}

/// Number of consecutive switch intervals required before a handoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchRule {
    pub intervals: usize,
}

impl Default for SwitchRule {
    fn default() -> Self {
        Self { intervals: 1 }
    }
}

impl SwitchRule {
    pub fn validate(&self) -> Result<(), SchedError> {
        if self.intervals == 0 {
            return Err(SchedError::Config("switch rule needs at least one interval".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignment: Vec<Activity>,
}

impl Schedule {
    pub fn idle(len: usize) -> Self {
        Self { assignment: vec![Activity::Idle; len] }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// Whether `s` is a valid schedule of length `m` over `n` nodes.
pub fn is_feasible(s: &Schedule, m: usize, n: usize, rule: &SwitchRule) -> bool {
    if s.len() != m {
        return false;
    }
    let a = &s.assignment;
    for j in 0..m {
        let Activity::Node(node) = a[j] else { continue };
        if node >= n {
            return false;
        }
        if j == 0 || a[j - 1] == Activity::Node(node) {
            continue;
        }
        let run = a[..j].iter().rev().take_while(|&&x| x == Activity::Switch).count();
        if run < rule.intervals && run < j {
            return false;
        }
    }
    true
}

/// Per-node delivered bits.
pub fn evaluate(s: &Schedule, k: &KeyMatrix) -> Result<Vec<f64>, SchedError> {
    if s.len() != k.n_intervals() {
        return Err(SchedError::Dimension { expected: k.n_intervals(), found: s.len() });
    }
    let mut totals = vec![0.0; k.n_nodes()];
    for (m, a) in s.assignment.iter().enumerate() {
        if let Activity::Node(n) = *a {
            if n >= k.n_nodes() {
                return Err(SchedError::Dimension { expected: k.n_nodes(), found: n + 1 });
            }
            totals[n] += k.get(m, n);
        }
    }
    Ok(totals)
}

/// Weighted objective `sum_n w_n E_n`.
pub fn objective(totals: &[f64], weights: Option<&[f64]>) -> f64 {
    match weights {
        Some(w) => totals.iter().zip(w).map(|(e, w)| e * w).sum(),
        None => totals.iter().sum(),
    }
}

/// Per-node fractions summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    probabilities: Vec<f64>,
}

impl Distribution {
    /// Normalise non-negative masses.
    pub fn from_masses(masses: &[f64]) -> Result<Self, SchedError> {
        if masses.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(SchedError::Weights("masses must be finite and non-negative".into()));
        }
        let sum: f64 = masses.iter().sum();
        if sum <= 0.0 {
            return Err(SchedError::EmptyDelivery);
        }
        Ok(Self { probabilities: masses.iter().map(|x| x / sum).collect() })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// `D(p || q)` in nats; `+inf` when `p` has mass where `q` has none.
///
/// # Panics
/// If the distributions have different lengths.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> f64 {
    kl_raw(p.probabilities(), q.probabilities())
}

pub(crate) fn kl_raw(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distribution lengths differ");
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            d += pi * (pi / qi).ln();
        }
    }
    d.max(0.0)
}

pub fn delivered_distribution(s: &Schedule, k: &KeyMatrix) -> Result<Distribution, SchedError> {
    Distribution::from_masses(&evaluate(s, k)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Maximise the total delivered key.
    #[serde(rename = "S-GD")]
    GeneralDelivery,
    /// Maximise the priority-weighted delivered key.
    #[serde(rename = "S-PD")]
    PrioritizedDelivery,
    /// Maximise the total while matching a target distribution.
    #[serde(rename = "S-TD")]
    TargetedDelivery,
}

impl StrategyKind {
    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::GeneralDelivery => "S-GD",
            StrategyKind::PrioritizedDelivery => "S-PD",
            StrategyKind::TargetedDelivery => "S-TD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Exact dynamic programming for S-GD/S-PD, genetic search for S-TD.
    #[default]
    Auto,
    Exact,
    Genetic,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Per-node weights; empty means uniform.
    #[serde(default)]
    pub weights: Vec<f64>,
    #[serde(default)]
    pub ga: GaConfig,
    /// Fraction of the best fitness inside which S-TD prefers lower divergence.
    #[serde(default = "default_kl_tolerance")]
    pub kl_tolerance: f64,
    #[serde(default)]
    pub switch: SwitchRule,
    #[serde(default)]
    pub solver: SolverKind,
}

fn default_kl_tolerance() -> f64 {
    0.05
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            weights: Vec::new(),
            ga: GaConfig::default(),
            kl_tolerance: default_kl_tolerance(),
            switch: SwitchRule::default(),
            solver: SolverKind::Auto,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = weights;
        self
    }

    pub fn validate(&self) -> Result<(), SchedError> {
        self.ga.validate()?;
        self.switch.validate()?;
        if !(0.0..1.0).contains(&self.kl_tolerance) {
            return Err(SchedError::Config("kl_tolerance must lie in [0, 1)".into()));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(SchedError::Weights("weights must be finite and non-negative".into()));
        }
        if !self.weights.is_empty() && self.weights.iter().all(|&w| w == 0.0) {
            return Err(SchedError::Weights("at least one weight must be positive".into()));
        }
        Ok(())
    }

    fn raw_weights(&self, n: usize) -> Result<Vec<f64>, SchedError> {
        if self.weights.is_empty() {
            return Ok(vec![1.0; n]);
        }
        if self.weights.len() != n {
            return Err(SchedError::Dimension { expected: n, found: self.weights.len() });
        }
        Ok(self.weights.clone())
    }

    /// Objective weights: all ones for S-GD and S-TD, scaled to a maximum of
    /// one for S-PD.
    pub fn objective_weights(&self, n: usize) -> Result<Vec<f64>, SchedError> {
        self.validate()?;
        let w = self.raw_weights(n)?;
        Ok(match self.kind {
            StrategyKind::PrioritizedDelivery => {
                let max = w.iter().copied().fold(0.0, f64::max);
                w.iter().map(|x| x / max).collect()
            }
            _ => vec![1.0; n],
        })
    }

    /// Target distribution (weights normalised to sum to one).
    pub fn target(&self, n: usize) -> Result<Distribution, SchedError> {
        self.validate()?;
        Distribution::from_masses(&self.raw_weights(n)?)
    }
}

/// Solve with the solver selected in `cfg`.
pub fn solve(k: &KeyMatrix, cfg: &StrategyConfig) -> Result<Schedule, SchedError> {
    let w = cfg.objective_weights(k.n_nodes())?;
    let weighted = cfg.kind == StrategyKind::PrioritizedDelivery;
    match (cfg.solver, cfg.kind) {
        (SolverKind::Greedy, _) => Ok(solve_greedy(k, &cfg.switch)),
        (SolverKind::Exact, StrategyKind::TargetedDelivery) => {
            Err(SchedError::Config("S-TD has no exact solver; use auto or genetic".into()))
        }
        (SolverKind::Exact | SolverKind::Auto, StrategyKind::GeneralDelivery) => solve_exact(k, None, &cfg.switch),
        (SolverKind::Exact | SolverKind::Auto, StrategyKind::PrioritizedDelivery) => {
            solve_exact(k, weighted.then_some(w.as_slice()), &cfg.switch)
        }
        (SolverKind::Auto | SolverKind::Genetic, _) => solve_ga(k, cfg),
    }
}
