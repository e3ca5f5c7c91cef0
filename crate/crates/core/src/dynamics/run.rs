use rand::Rng;

use super::{overflowed, step_into, StateVector};
use crate::error::{Error, Result};
use crate::graph::positive_cluster_partition;
use crate::metrics::{compute_metrics, detect_convergence, DivergenceMode, Metrics};
use crate::sampling::{sample_attention, sample_interactions, Purpose, RandomStream};
use crate::scenario::{InitialState, ScenarioConfig};
use crate::schedule::total_graph;

/// The attention coins drawn at one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coins {
    pub positive: bool,
    pub negative: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    HorizonReached,
    /// Early stop: every node settled over the trailing window.
    Converged {
        t: u64,
    },
    /// Early stop: the divergence metric reached the stop threshold.
    Diverged {
        t: u64,
    },
    /// The state at slot `t` would have exceeded the cap; it was not committed.
    NumericOverflow {
        t: u64,
        cap: f64,
    },
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::HorizonReached => "horizon_reached",
            Termination::Converged { .. } => "converged",
            Termination::Diverged { .. } => "diverged",
            Termination::NumericOverflow { .. } => "numeric_overflow",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub run: u64,
    /// Recorded states in slot order. The first is `s(0)`, the last is the
    /// final committed state.
    pub states: Vec<StateVector>,
    /// `metrics[k]` belongs to `states[k]`.
    pub metrics: Vec<Metrics>,
    /// `coins[t]` gated the step from slot `t` to `t + 1`.
    pub coins: Vec<Coins>,
    pub termination: Termination,
}

impl TrajectoryRecord {
    /// A record built from explicit `(t, state)` pairs, for analysis of
    /// trajectories produced elsewhere.
    pub fn from_states(states: impl IntoIterator<Item = (u64, Vec<f64>)>) -> Self {
        let states: Vec<StateVector> = states
            .into_iter()
            .map(|(t, s)| StateVector { t, s })
            .collect();
        let metrics = states.iter().map(|s| compute_metrics(&s.s)).collect();
        TrajectoryRecord {
            run: 0,
            states,
            metrics,
            coins: Vec::new(),
            termination: Termination::HorizonReached,
        }
    }

    pub fn n(&self) -> usize {
        self.states.first().map_or(0, StateVector::n)
    }

    pub fn initial(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        self.states.last().expect("a record always holds s(0)")
    }

    /// Slots actually executed.
    pub fn steps(&self) -> u64 {
        self.last().t
    }

    fn push(&mut self, t: u64, s: &[f64]) {
        self.metrics.push(compute_metrics(s));
        self.states.push(StateVector { t, s: s.to_vec() });
    }
}

/// `s(0)` for the given run.
pub fn initial_state(cfg: &ScenarioConfig, run: u64) -> Result<Vec<f64>> {
    let n = cfg.schedule.n();
    match &cfg.init {
        InitialState::Explicit(v) => {
            if v.len() != n {
                return Err(Error::validation(
                    "init.values",
                    format!("has length {} but the graph has {n} nodes", v.len()),
                ));
            }
            Ok(v.clone())
        }
        InitialState::Uniform { lo, hi } => {
            if lo == hi {
                return Ok(vec![*lo; n]);
            }
            let mut rng = RandomStream::new(cfg.seed, run, 0, Purpose::InitialState).rng();
            Ok((0..n).map(|_| rng.random_range(*lo..*hi)).collect())
        }
        InitialState::ClusterLevels(levels) => {
            let partition =
                positive_cluster_partition(&total_graph(&cfg.schedule, cfg.horizon)?.graph);
            if levels.len() != partition.count() {
                return Err(Error::validation(
                    "init.levels",
                    format!(
                        "has {} entries but the total graph has {} positive clusters",
                        levels.len(),
                        partition.count()
                    ),
                ));
            }
            Ok((0..n)
                .map(|i| levels[partition.cluster_of(i).expect("partition covers V")])
                .collect())
        }
        InitialState::ClusterSpacing(eps) => {
            let partition =
                positive_cluster_partition(&total_graph(&cfg.schedule, cfg.horizon)?.graph);
            Ok((0..n)
                .map(|i| (partition.cluster_of(i).expect("partition covers V") + 1) as f64 * eps)
                .collect())
        }
    }
}

/// Executes run `run` of the scenario from `s(0)` up to the horizon or an
/// early stop. Deterministic in `(cfg, run)`.
pub fn run(cfg: &ScenarioConfig, run: u64) -> Result<TrajectoryRecord> {
    let s0 = initial_state(cfg, run)?;
    let n = s0.len();
    let model = &cfg.model;
    if overflowed(&s0, model.cap) {
        return Err(Error::validation(
            "init",
            "initial state exceeds the overflow cap",
        ));
    }
    let stride = cfg.stride.max(1);
    let detect = &cfg.detect;
    let window = detect.window_for(cfg.horizon);
    let stop_threshold = detect.stop_threshold.unwrap_or(detect.diverge_threshold);

    let mut record = TrajectoryRecord {
        run,
        states: Vec::new(),
        metrics: Vec::new(),
        coins: Vec::new(),
        termination: Termination::HorizonReached,
    };
    record.push(0, &s0);

    let mut s = s0;
    let mut next = vec![0.0; n];
    let (mut hp, mut hn) = (vec![0.0; n], vec![0.0; n]);
    let base = RandomStream::new(cfg.seed, run, 0, Purpose::Arcs);

    for t in 0..cfg.horizon {
        let b = sample_attention(
            &cfg.positive_attention,
            t,
            base.at(t, Purpose::PositiveAttention),
        );
        let d = sample_attention(
            &cfg.negative_attention,
            t,
            base.at(t, Purpose::NegativeAttention),
        );
        record.coins.push(Coins {
            positive: b,
            negative: d,
        });
        let slot = t + 1;

        if b || d {
            let sample = sample_interactions(
                cfg.schedule.graph_at(t),
                &cfg.interaction,
                base.at(t, Purpose::Arcs),
            );
            step_into(&s, &sample, b, d, model, (&mut hp, &mut hn), &mut next);
        } else {
            // Both gates closed: the update is the identity whatever arcs interact.
            next.copy_from_slice(&s);
        }
        if overflowed(&next, model.cap) {
            record.termination = Termination::NumericOverflow {
                t: slot,
                cap: model.cap,
            };
            break;
        }
        std::mem::swap(&mut s, &mut next);

        let on_stride = slot % stride == 0 || slot == cfg.horizon;
        if on_stride {
            record.push(slot, &s);
        }
        if detect.early_stop {
            let m = compute_metrics(&s);
            let metric = match detect.diverge_mode {
                DivergenceMode::MaxAbs => m.max_abs,
                DivergenceMode::MaxGap => m.gap,
            };
            if metric >= stop_threshold {
                if !on_stride {
                    record.push(slot, &s);
                }
                record.termination = Termination::Diverged { t: slot };
                break;
            }
            if on_stride
                && slot % window == 0
                && detect_convergence(&record, window, detect.eps).is_some()
            {
                record.termination = Termination::Converged { t: slot };
                break;
            }
        }
    }
    if let Termination::NumericOverflow { t, .. } = record.termination {
        if record.last().t != t - 1 {
            record.push(t - 1, &s);
        }
    }
    Ok(record)
}
