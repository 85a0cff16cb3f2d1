//! Satellite-to-ground quantum key distribution downlink modelling.
//!
//! The crate is organised along the processing chain:
//!
//! - [`orbit`]: two-line element parsing, propagation, look angles, night-time
//!   gating and access windows.
//! - [`channel`]: per-sample loss decomposition (geometric, atmospheric, cloud,
//!   fixed system losses) and the resulting transmittance.
//! - [`cloud`]: gridded cloud optical thickness index and its attenuation.
//! - [`qkd`]: asymptotic decoy-state BB84 key rates and the interval/node key
//!   matrix.
//! - [`sched`]: single-satellite multi-station downlink scheduling (exact,
//!   greedy and genetic solvers).

#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cloud;
pub mod orbit;
pub mod qkd;
pub mod sched;
pub mod time;

pub use channel::{BeamConvention, LinkSample, LossBreakdown, OpticalParams};
pub use cloud::CloudGrid;
pub use orbit::{
    AccessConfig, AccessInterval, Ephemeris, GroundStation, LookAngles, Propagator, SatelliteState, TleElements,
    Trajectory,
};
pub use qkd::{KeyGrid, KeyMatrix, QkdParams, RateResult};
pub use sched::{Activity, Distribution, Schedule, StrategyConfig, StrategyKind, SwitchRule};
