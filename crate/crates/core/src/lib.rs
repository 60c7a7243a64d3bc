//! RALT: a radiation-aware rerouting simulator for LEO satellite networks.
//!
//! Satellites accumulate radiation damage, anneal it with on-board heaters,
//! pay drag make-up energy that scales with radiation-driven atmospheric
//! density, and occasionally drop into sleep after single-event upsets. The
//! engine steps a constellation through this environment under one of
//! three rerouting policies and records battery, latency and shutdown
//! metrics.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod calibrate;
pub mod config;
pub mod constellation;
pub mod damage;
pub mod engine;
pub mod error;
pub mod power;
pub mod radiation;
pub mod report;
pub mod routing;
pub mod traffic;

pub use config::ScenarioConfig;
pub use engine::{compare, run, Mode, RunReport, RunSummary, Simulation};
pub use error::{Error, Result};
pub use routing::Policy;
