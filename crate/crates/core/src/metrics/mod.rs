//! Quantities derived from states and trajectories: extreme values, the
//! convergence, clustering and divergence detectors, the window constants of
//! the weak-consensus and cluster-consensus conditions, and verdict
//! aggregation across Monte Carlo runs.

mod constants;
mod detect;
mod verdict;

pub use constants::{window_coefficients, DerivedConstants, WindowCoefficients};
pub use detect::{
    detect_bipolar_clustering, detect_convergence, detect_divergence, detect_no_survivor,
    BipolarVerdict, Crossing, DivergenceMode, Member, NoSurvivorReport, SurvivorMode,
};
pub use verdict::{
    aggregate_verdicts, classify_run, wilson_interval, DetectSettings, RunVerdict, Verdict,
    VerdictReport, Z95,
};

/// `M = max |s_i|`, `H = max s_i`, `h = min s_i`, `gap = H - h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub max_abs: f64,
    pub max: f64,
    pub min: f64,
    pub gap: f64,
}

pub fn compute_metrics(s: &[f64]) -> Metrics {
    let mut max_abs = 0.0f64;
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for &x in s {
        max_abs = max_abs.max(x.abs());
        max = max.max(x);
        min = min.min(x);
    }
    Metrics {
        max_abs,
        max,
        min,
        gap: max - min,
    }
}
