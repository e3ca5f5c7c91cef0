//! Simulation and analysis of opinion dynamics over dynamic signed random
//! networks: the update law under both negative-recommendation models,
//! structural analysis of signed graphs, detectors for convergence,
//! clustering and divergence, and Monte Carlo verification suites.

pub mod analyze;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod montecarlo;
pub mod sampling;
pub mod scenario;
pub mod schedule;
pub mod suites;

pub use error::{Error, Result};
