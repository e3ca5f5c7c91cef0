use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::detect::{
    detect_bipolar_clustering, detect_convergence, detect_divergence, DivergenceMode,
};
use crate::dynamics::{Termination, TrajectoryRecord};
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Thresholds the detectors and early stop use.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectSettings {
    /// Oscillation tolerance for convergence.
    pub eps: f64,
    /// Trailing window in slots; `None` means `max(100, horizon / 100)`.
    pub window: Option<u64>,
    /// Tolerance for cluster patterns, zero limits and weak consensus.
    pub cluster_eps: f64,
    pub diverge_threshold: f64,
    pub diverge_mode: DivergenceMode,
    pub early_stop: bool,
    /// Metric level that stops a run early; `None` reuses `diverge_threshold`.
    pub stop_threshold: Option<f64>,
}

impl Default for DetectSettings {
    fn default() -> Self {
        DetectSettings {
            eps: 1e-6,
            window: None,
            cluster_eps: 1e-4,
            diverge_threshold: 1e8,
            diverge_mode: DivergenceMode::MaxAbs,
            early_stop: false,
            stop_threshold: None,
        }
    }
}

impl DetectSettings {
    pub fn window_for(&self, horizon: u64) -> u64 {
        self.window.unwrap_or((horizon / 100).max(100)).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, field: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(field, "must be finite and > 0"))
            }
        };
        positive(self.eps, "detect.eps")?;
        positive(self.cluster_eps, "detect.cluster_eps")?;
        positive(self.diverge_threshold, "detect.diverge_threshold")?;
        if let Some(t) = self.stop_threshold {
            positive(t, "detect.stop_threshold")?;
        }
        if self.window == Some(0) {
            return Err(Error::validation("detect.window", "must be ≥ 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Converged,
    WeakConsensus,
    BipolarClustered,
    AllZero,
    DivergedM,
    DivergedGap,
    Inconclusive,
}

impl Verdict {
    pub const ALL: [Verdict; 7] = [
        Verdict::Converged,
        Verdict::WeakConsensus,
        Verdict::BipolarClustered,
        Verdict::AllZero,
        Verdict::DivergedM,
        Verdict::DivergedGap,
        Verdict::Inconclusive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Converged => "converged",
            Verdict::WeakConsensus => "weak_consensus",
            Verdict::BipolarClustered => "bipolar_clustered",
            Verdict::AllZero => "all_zero",
            Verdict::DivergedM => "diverged_M",
            Verdict::DivergedGap => "diverged_gap",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Verdict::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::validation("verdict", format!("unknown verdict `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunVerdict {
    pub verdict: Verdict,
    /// Slot where the divergence metric first reached its threshold.
    pub first_cross: Option<u64>,
    /// Trailing-window means, when the run settled.
    pub limits: Option<Vec<f64>>,
    pub y_star: Option<f64>,
    pub final_gap: f64,
}

/// Classifies one run. Divergence takes precedence over convergence, which
/// takes precedence over weak consensus. A settled run is `all_zero` when
/// every limit is within `cluster_eps` of zero, and `bipolar_clustered` when
/// a bipartition is given and the limits follow it.
pub fn classify_run(
    traj: &TrajectoryRecord,
    detect: &DetectSettings,
    horizon: u64,
    bipartition: Option<(&[usize], &[usize])>,
) -> RunVerdict {
    let final_gap = traj.metrics.last().map_or(0.0, |m| m.gap);
    let diverged = match detect.diverge_mode {
        DivergenceMode::MaxAbs => Verdict::DivergedM,
        DivergenceMode::MaxGap => Verdict::DivergedGap,
    };
    let first_cross = detect_divergence(traj, detect.diverge_threshold, detect.diverge_mode);
    let overflow = match traj.termination {
        Termination::NumericOverflow { t, .. } => Some(t),
        _ => None,
    };
    if first_cross.is_some() || overflow.is_some() {
        return RunVerdict {
            verdict: diverged,
            first_cross: first_cross.or(overflow),
            limits: None,
            y_star: None,
            final_gap,
        };
    }
    if let Some(limits) = detect_convergence(traj, detect.window_for(horizon), detect.eps) {
        let (verdict, y_star) = if limits.iter().all(|x| x.abs() < detect.cluster_eps) {
            (Verdict::AllZero, None)
        } else if let Some(y) = bipartition
            .map(|p| detect_bipolar_clustering(&limits, p, detect.cluster_eps, None))
            .and_then(|b| match b {
                super::BipolarVerdict::Match { y_star, .. } => Some(y_star),
                super::BipolarVerdict::Mismatch => None,
            })
        {
            (Verdict::BipolarClustered, Some(y))
        } else {
            (Verdict::Converged, None)
        };
        return RunVerdict {
            verdict,
            first_cross: None,
            limits: Some(limits),
            y_star,
            final_gap,
        };
    }
    let verdict = if final_gap < detect.cluster_eps {
        Verdict::WeakConsensus
    } else {
        Verdict::Inconclusive
    };
    RunVerdict {
        verdict,
        first_cross: None,
        limits: None,
        y_star: None,
        final_gap,
    }
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Verdict counts over a batch. Runs that ended in an error are counted as
/// inconclusive and also tallied in `errors`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerdictReport {
    pub runs: u64,
    pub errors: u64,
    pub counts: BTreeMap<Verdict, u64>,
}

impl VerdictReport {
    pub fn count(&self, v: Verdict) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn fraction(&self, v: Verdict) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.count(v) as f64 / self.runs as f64
        }
    }

    pub fn wilson(&self, v: Verdict) -> (f64, f64) {
        wilson_interval(self.count(v), self.runs, Z95)
    }

    pub fn record(&mut self, v: Verdict) {
        self.runs += 1;
        *self.counts.entry(v).or_insert(0) += 1;
    }

    pub fn record_error(&mut self) {
        self.record(Verdict::Inconclusive);
        self.errors += 1;
    }

    /// Associative and commutative.
    pub fn merge(&mut self, other: &VerdictReport) {
        self.runs += other.runs;
        self.errors += other.errors;
        for (v, c) in &other.counts {
            *self.counts.entry(*v).or_insert(0) += c;
        }
    }

    /// `key = value` lines.
    pub fn render(&self) -> String {
        let mut out = format!("runs = {}\nerrors = {}\n", self.runs, self.errors);
        for v in Verdict::ALL {
            let (lo, hi) = self.wilson(v);
            out += &format!(
                "{v}.count = {}\n{v}.fraction = {}\n{v}.ci_low = {lo:.6}\n{v}.ci_high = {hi:.6}\n",
                self.count(v),
                self.fraction(v)
            );
        }
        out
    }
}

pub fn aggregate_verdicts(verdicts: &[Verdict]) -> VerdictReport {
    let mut r = VerdictReport::default();
    for &v in verdicts {
        r.record(v);
    }
    r
}
