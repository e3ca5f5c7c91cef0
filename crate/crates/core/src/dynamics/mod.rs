//! The update law and trajectory execution.
//!
//! At every slot each node moves by `alpha * B * h_plus + beta * D * h_minus`,
//! where the recommendations are computed from the sampled in-neighbours and
//! every node reads the same pre-update state.

mod oracle;
mod run;

pub use oracle::{one_step_expectation_oracle, ORACLE_ARC_LIMIT};
pub use run::{initial_state, run, Coins, Termination, TrajectoryRecord};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Sign;
use crate::sampling::InteractionSample;

pub const DEFAULT_CAP: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NegativeModel {
    /// Negative neighbours contribute `-(s_i + s_j)`.
    StateReversion,
    /// Negative neighbours contribute `s_i - s_j`.
    RelativeStateReversion,
}

impl NegativeModel {
    pub fn name(self) -> &'static str {
        match self {
            NegativeModel::StateReversion => "state_reversion",
            NegativeModel::RelativeStateReversion => "relative_state_reversion",
        }
    }
}

impl fmt::Display for NegativeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NegativeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "state_reversion" => Ok(NegativeModel::StateReversion),
            "relative_state_reversion" => Ok(NegativeModel::RelativeStateReversion),
            other => Err(Error::validation(
                "model.negative",
                format!(
                    "unknown model `{other}`; expected state_reversion or relative_state_reversion"
                ),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelConfig {
    pub negative_model: NegativeModel,
    pub alpha: f64,
    pub beta: f64,
    /// Largest admissible `|s_i|`; anything beyond is reported as overflow.
    pub cap: f64,
}

impl ModelConfig {
    /// Requires `alpha > 0` and `beta > 0`.
    pub fn new(negative_model: NegativeModel, alpha: f64, beta: f64) -> Result<Self> {
        Self::build(negative_model, alpha, beta, false)
    }

    /// As [`ModelConfig::new`] but admits `alpha = 0`.
    pub fn with_zero_alpha(negative_model: NegativeModel, alpha: f64, beta: f64) -> Result<Self> {
        Self::build(negative_model, alpha, beta, true)
    }

    fn build(
        negative_model: NegativeModel,
        alpha: f64,
        beta: f64,
        allow_zero_alpha: bool,
    ) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::validation("model.alpha", "must be ≥ 0"));
        }
        if alpha == 0.0 && !allow_zero_alpha {
            return Err(Error::validation(
                "model.alpha",
                "must be > 0 unless allow_zero_alpha is set",
            ));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::validation("model.beta", "must be > 0"));
        }
        Ok(ModelConfig {
            negative_model,
            alpha,
            beta,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if cap.is_nan() || cap <= 0.0 {
            return Err(Error::validation("detect.cap", "must be > 0"));
        }
        self.cap = cap;
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub t: u64,
    pub s: Vec<f64>,
}

impl StateVector {
    pub fn new(s: Vec<f64>) -> Self {
        StateVector { t: 0, s }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }
}

/// `h_plus = -sum_{j in N+} (s_i - s_j)`.
pub fn positive_recommendation(s: &[f64], i: usize, nplus: &[usize]) -> f64 {
    nplus.iter().fold(0.0, |acc, &j| acc - (s[i] - s[j]))
}

/// `-sum (s_i + s_j)` or `+sum (s_i - s_j)` over `N-`, depending on the model.
pub fn negative_recommendation(s: &[f64], i: usize, nminus: &[usize], model: NegativeModel) -> f64 {
    match model {
        NegativeModel::StateReversion => nminus.iter().fold(0.0, |acc, &j| acc - (s[i] + s[j])),
        NegativeModel::RelativeStateReversion => {
            nminus.iter().fold(0.0, |acc, &j| acc + (s[i] - s[j]))
        }
    }
}

/// Writes `s(t+1)` into `next`. `hp` and `hn` are scratch buffers of length n.
///
/// Arcs are visited in sample order, which is ascending source id for every
/// destination, so each sum is accumulated in the same order that
/// [`neighbor_sets`](crate::sampling::neighbor_sets) lists the neighbours.
pub(crate) fn step_into(
    s: &[f64],
    sample: &InteractionSample,
    b: bool,
    d: bool,
    cfg: &ModelConfig,
    scratch: (&mut [f64], &mut [f64]),
    next: &mut [f64],
) {
    let (hp, hn) = scratch;
    hp.fill(0.0);
    hn.fill(0.0);
    for a in &sample.arcs {
        let (i, j) = (a.dst, a.src);
        match a.sign {
            Sign::Positive => hp[i] -= s[i] - s[j],
            Sign::Negative => match cfg.negative_model {
                NegativeModel::StateReversion => hn[i] -= s[i] + s[j],
                NegativeModel::RelativeStateReversion => hn[i] += s[i] - s[j],
            },
        }
    }
    let bf = if b { 1.0 } else { 0.0 };
    let df = if d { 1.0 } else { 0.0 };
    for i in 0..s.len() {
        next[i] = s[i] + cfg.alpha * bf * hp[i] + cfg.beta * df * hn[i];
    }
}

pub(crate) fn overflowed(s: &[f64], cap: f64) -> bool {
    s.iter().any(|x| x.is_nan() || x.abs() > cap)
}

/// One synchronous application of the update law.
pub fn step(
    s: &StateVector,
    sample: &InteractionSample,
    b: bool,
    d: bool,
    cfg: &ModelConfig,
) -> Result<StateVector> {
    if sample.n != s.n() {
        return Err(Error::validation(
            "state",
            format!("length {} does not match graph size {}", s.n(), sample.n),
        ));
    }
    let n = s.n();
    let (mut hp, mut hn, mut next) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    step_into(&s.s, sample, b, d, cfg, (&mut hp, &mut hn), &mut next);
    if overflowed(&next, cfg.cap) {
        return Err(Error::NumericOverflow {
            t: s.t + 1,
            cap: cfg.cap,
        });
    }
    Ok(StateVector {
        t: s.t + 1,
        s: next,
    })
}
