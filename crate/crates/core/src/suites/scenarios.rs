//! The scenarios each suite runs by default.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SuiteId;
use crate::dynamics::{ModelConfig, NegativeModel};
use crate::graph::{is_strongly_connected, SignSelector, SignedArc, SignedDigraph};
use crate::metrics::DivergenceMode;
use crate::sampling::{AttentionSchedule, InteractionPolicy};
use crate::scenario::{InitialState, ScenarioConfig};
use crate::schedule::GraphSchedule;

/// Six nodes, strongly connected, both signs present. Drawn once from a
/// fixed stream so every build sees the same graph.
pub fn random_signed_graph() -> SignedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    loop {
        let g = SignedDigraph::random(6, 0.5, 0.3, &mut rng).expect("random graphs are valid");
        if is_strongly_connected(&g, SignSelector::All) && g.has_negative() && g.has_positive() {
            return g;
        }
    }
}

/// Positive cycle `0 -> 1 -> 2 -> 0` and the reverse cycle negative: both
/// sign classes strongly connected on their own.
pub fn opposed_cycles() -> SignedDigraph {
    SignedDigraph::new(
        3,
        [
            SignedArc::pos(0, 1),
            SignedArc::pos(1, 2),
            SignedArc::pos(2, 0),
            SignedArc::neg(1, 0),
            SignedArc::neg(2, 1),
            SignedArc::neg(0, 2),
        ],
    )
    .expect("valid")
}

/// Complete graph on `{0,1,2} + {3,4,5}`: positive inside each side,
/// negative across. With `frustrated`, the pair `0 <-> 1` is negative too,
/// which closes the odd negative cycle `0, 1, 3`.
pub fn two_camps(frustrated: bool) -> SignedDigraph {
    let side = |i: usize| i / 3;
    let arcs = (0..6).flat_map(|i| (0..6).filter(move |&j| j != i).map(move |j| (i, j)));
    SignedDigraph::new(
        6,
        arcs.map(|(i, j)| {
            let cross = side(i) != side(j);
            let odd = frustrated && i.max(j) == 1;
            if cross || odd {
                SignedArc::neg(i, j)
            } else {
                SignedArc::pos(i, j)
            }
        }),
    )
    .expect("valid")
}

/// Positive pairs `0 <-> 1` and `2 <-> 3`, joined by negative arcs
/// `1 -> 2` and `3 -> 0`.
pub fn two_clusters() -> SignedDigraph {
    SignedDigraph::new(
        4,
        [
            SignedArc::pos(0, 1),
            SignedArc::pos(1, 0),
            SignedArc::pos(2, 3),
            SignedArc::pos(3, 2),
            SignedArc::neg(1, 2),
            SignedArc::neg(3, 0),
        ],
    )
    .expect("valid")
}

/// Positive path `0 -> 1 -> 2` closed by the negative arc `2 -> 0`.
pub fn signed_path() -> SignedDigraph {
    SignedDigraph::new(
        3,
        [
            SignedArc::pos(0, 1),
            SignedArc::pos(1, 2),
            SignedArc::neg(2, 0),
        ],
    )
    .expect("valid")
}

/// Three nodes, both signs, five arcs: small enough to enumerate.
pub fn oracle_graph() -> SignedDigraph {
    SignedDigraph::new(
        3,
        [
            SignedArc::pos(0, 1),
            SignedArc::pos(1, 2),
            SignedArc::pos(2, 0),
            SignedArc::neg(1, 0),
            SignedArc::neg(2, 1),
        ],
    )
    .expect("valid")
}

#[allow(clippy::too_many_arguments)]
fn scenario(
    g: SignedDigraph,
    model: NegativeModel,
    alpha: f64,
    beta: f64,
    b: AttentionSchedule,
    d: AttentionSchedule,
    horizon: u64,
    runs: u64,
) -> ScenarioConfig {
    let model = ModelConfig::new(model, alpha, beta).expect("suite parameters are valid");
    let mut cfg = ScenarioConfig::new(GraphSchedule::Static(g), model, horizon);
    cfg.interaction = InteractionPolicy::per_arc(0.5).expect("valid");
    cfg.positive_attention = b;
    cfg.negative_attention = d;
    cfg.num_runs = runs;
    cfg.seed = 1;
    cfg
}

fn constant(q: f64) -> AttentionSchedule {
    AttentionSchedule::Constant(q)
}

fn inverse_square() -> AttentionSchedule {
    AttentionSchedule::PowerDecay { c: 1.0, gamma: 2.0 }
}

/// Nonexpansive state reversion on [`random_signed_graph`].
pub fn contraction(horizon: u64, runs: u64) -> ScenarioConfig {
    let sr = NegativeModel::StateReversion;
    scenario(
        random_signed_graph(),
        sr,
        0.08,
        0.08,
        constant(0.5),
        constant(0.5),
        horizon,
        runs,
    )
}

/// State reversion with a dominant negative weight on [`opposed_cycles`].
pub fn blow_up(horizon: u64, runs: u64) -> ScenarioConfig {
    let sr = NegativeModel::StateReversion;
    scenario(
        opposed_cycles(),
        sr,
        0.1,
        2000.0,
        constant(0.5),
        constant(0.5),
        horizon,
        runs,
    )
}

/// Relative state reversion on [`two_clusters`] with inverse-square
/// negative attention.
pub fn fading_repulsion(horizon: u64, runs: u64) -> ScenarioConfig {
    let rsr = NegativeModel::RelativeStateReversion;
    scenario(
        two_clusters(),
        rsr,
        0.2,
        1.0,
        constant(0.5),
        inverse_square(),
        horizon,
        runs,
    )
}

/// The scenarios a suite runs when none is supplied.
pub fn default_scenarios(id: SuiteId) -> Vec<ScenarioConfig> {
    let sr = NegativeModel::StateReversion;
    let rsr = NegativeModel::RelativeStateReversion;
    match id {
        SuiteId::L1 => vec![contraction(2_000, 200)],
        SuiteId::L2 => vec![contraction(400, 50)],
        SuiteId::T1 => {
            let mut c = contraction(50_000, 100);
            c.stride = 10;
            vec![c]
        }
        SuiteId::T2i | SuiteId::T2ii => {
            let g = two_camps(id == SuiteId::T2ii);
            let mut c = scenario(g, sr, 0.08, 0.08, constant(0.5), constant(0.5), 50_000, 100);
            c.stride = 10;
            vec![c]
        }
        SuiteId::L5 => vec![blow_up(200, 50)],
        SuiteId::T3 | SuiteId::P1 => {
            let mut c = blow_up(2_000, 100);
            c.detect.early_stop = true;
            c.detect.stop_threshold = Some(1e200);
            vec![c]
        }
        SuiteId::T4i | SuiteId::T7 => {
            let mut c = fading_repulsion(50_000, 100);
            c.stride = 10;
            vec![c]
        }
        SuiteId::L10 => vec![fading_repulsion(50_000, 100)],
        SuiteId::T4ii => {
            let mut c = scenario(
                two_clusters(),
                rsr,
                0.2,
                1.0,
                constant(0.5),
                constant(0.1),
                20_000,
                100,
            );
            c.init = InitialState::ClusterSpacing(1.0);
            c.detect.diverge_mode = DivergenceMode::MaxGap;
            c.detect.diverge_threshold = 1e6;
            c.detect.early_stop = true;
            vec![c]
        }
        SuiteId::T5 => {
            let mut c = scenario(
                signed_path(),
                rsr,
                0.2,
                0.05,
                constant(0.9),
                constant(1e-6),
                1_000_000,
                100,
            );
            c.stride = 10_000;
            if let Some(p) = super::weak_consensus_grid(&c).first() {
                c.model.beta = p.beta;
                c.positive_attention = constant(p.b);
                c.negative_attention = constant(p.d);
            }
            vec![c]
        }
        SuiteId::T6 | SuiteId::P2 => {
            let mut c = scenario(
                opposed_cycles(),
                rsr,
                0.05,
                1.0,
                constant(0.01),
                constant(0.5),
                5_000,
                100,
            );
            c.detect.diverge_mode = DivergenceMode::MaxGap;
            c.detect.early_stop = true;
            c.detect.stop_threshold = Some(1e200);
            vec![c]
        }
        SuiteId::Oracle => {
            let mut out = Vec::new();
            for model in [sr, rsr] {
                let policies = [
                    InteractionPolicy::per_arc(0.5)
                        .and_then(|p| p.with_override(0, 1, 0.8))
                        .expect("valid"),
                    InteractionPolicy::gossip(),
                    InteractionPolicy::full(),
                ];
                for policy in policies {
                    let mut c = scenario(
                        oracle_graph(),
                        model,
                        0.2,
                        0.3,
                        constant(0.6),
                        constant(0.3),
                        1,
                        200_000,
                    );
                    c.interaction = policy;
                    c.init = InitialState::Explicit(vec![1.0, -2.0, 3.0]);
                    out.push(c);
                }
            }
            out
        }
    }
}
