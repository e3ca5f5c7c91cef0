//! Executable scenario descriptions and their TOML file format.

mod file;

pub use file::{load_scenario, parse_scenario};

use crate::dynamics::ModelConfig;
use crate::error::{Error, Result};
use crate::metrics::DetectSettings;
use crate::sampling::{AttentionSchedule, InteractionPolicy};
use crate::schedule::GraphSchedule;

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Explicit(Vec<f64>),
    /// Independent uniform draws per node, from the run's own stream.
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// One value per positive cluster of the total graph, in cluster order.
    ClusterLevels(Vec<f64>),
    /// `s_i = j * epsilon` for `i` in the `j`-th positive cluster, `j >= 1`.
    ClusterSpacing(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub schedule: GraphSchedule,
    /// Window length used by the joint-connectivity assumptions.
    pub k: u64,
    pub interaction: InteractionPolicy,
    pub model: ModelConfig,
    pub allow_zero_alpha: bool,
    pub positive_attention: AttentionSchedule,
    pub negative_attention: AttentionSchedule,
    pub init: InitialState,
    pub horizon: u64,
    pub stride: u64,
    pub seed: u64,
    pub num_runs: u64,
    pub detect: DetectSettings,
}

impl ScenarioConfig {
    /// A scenario with the documented defaults around the given pieces.
    pub fn new(schedule: GraphSchedule, model: ModelConfig, horizon: u64) -> Self {
        ScenarioConfig {
            schedule,
            k: 1,
            interaction: InteractionPolicy::full(),
            model,
            allow_zero_alpha: model.alpha == 0.0,
            positive_attention: AttentionSchedule::Constant(1.0),
            negative_attention: AttentionSchedule::Constant(1.0),
            init: InitialState::Uniform { lo: -1.0, hi: 1.0 },
            horizon,
            stride: 1,
            seed: 0,
            num_runs: 1,
            detect: DetectSettings::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.schedule.n()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.k == 0 {
            return Err(Error::validation("schedule.k", "must be ≥ 1"));
        }
        self.interaction.validate()?;
        self.positive_attention.validate("attention.positive")?;
        self.negative_attention.validate("attention.negative")?;
        self.detect.validate()?;
        if self.stride == 0 {
            return Err(Error::validation("record.stride", "must be ≥ 1"));
        }
        if self.num_runs == 0 {
            return Err(Error::validation("run.num_runs", "must be ≥ 1"));
        }
        if self.model.alpha == 0.0 && !self.allow_zero_alpha {
            return Err(Error::validation(
                "model.alpha",
                "must be > 0 unless allow_zero_alpha is set",
            ));
        }
        let finite = |v: &[f64], field: &str| {
            if v.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::validation(field, "entries must be finite"))
            }
        };
        match &self.init {
            InitialState::Explicit(v) => {
                if v.len() != n {
                    return Err(Error::validation(
                        "init.values",
                        format!("has length {} but the graph has {n} nodes", v.len()),
                    ));
                }
                finite(v, "init.values")?;
            }
            InitialState::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::validation("init.lo", "need finite lo ≤ hi"));
                }
            }
            InitialState::ClusterLevels(v) => {
                finite(v, "init.levels")?;
                crate::dynamics::initial_state(self, 0)?;
            }
            InitialState::ClusterSpacing(eps) => finite(&[*eps], "init.epsilon")?,
        }
        Ok(())
    }
}
