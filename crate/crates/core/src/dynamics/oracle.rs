use super::{negative_recommendation, positive_recommendation, ModelConfig, StateVector};
use crate::error::{Error, Result};
use crate::graph::{SignedArc, SignedDigraph};
use crate::sampling::{neighbor_sets, InteractionKind, InteractionPolicy, InteractionSample};

/// Largest arc set the exhaustive enumeration accepts.
pub const ORACLE_ARC_LIMIT: usize = 16;

/// Exact `E[s(t+1)]` by enumerating every arc subset the policy can draw and
/// both attention coins.
///
/// Deliberately avoids [`step`](super::step): each outcome is evaluated from
/// the neighbour sets and the recommendation formulas.
pub fn one_step_expectation_oracle(
    s: &StateVector,
    g: &SignedDigraph,
    policy: &InteractionPolicy,
    b: f64,
    d: f64,
    cfg: &ModelConfig,
) -> Result<Vec<f64>> {
    let m = g.arc_count();
    if m > ORACLE_ARC_LIMIT {
        return Err(Error::TooLarge {
            arcs: m,
            limit: ORACLE_ARC_LIMIT,
        });
    }
    let outcomes: Vec<(f64, Vec<SignedArc>)> = match policy.kind {
        InteractionKind::Full => vec![(1.0, g.arcs().to_vec())],
        InteractionKind::Gossip if m == 0 => vec![(1.0, Vec::new())],
        InteractionKind::Gossip => g
            .arcs()
            .iter()
            .map(|a| (1.0 / m as f64, vec![*a]))
            .collect(),
        InteractionKind::PerArc { .. } => (0u32..1 << m)
            .map(|mask| {
                let mut weight = 1.0;
                let mut chosen = Vec::new();
                for (k, a) in g.arcs().iter().enumerate() {
                    let p = policy.arc_probability(g, a.src, a.dst);
                    if mask & (1 << k) != 0 {
                        weight *= p;
                        chosen.push(*a);
                    } else {
                        weight *= 1.0 - p;
                    }
                }
                (weight, chosen)
            })
            .collect(),
    };

    let n = s.n();
    let mut expected = vec![0.0; n];
    for (weight, arcs) in outcomes {
        if weight == 0.0 {
            continue;
        }
        let sample = InteractionSample {
            n,
            arcs,
            empty_gossip: false,
        };
        for (i, e) in expected.iter_mut().enumerate() {
            let (np, nm) = neighbor_sets(&sample, i);
            let hp = positive_recommendation(&s.s, i, &np);
            let hn = negative_recommendation(&s.s, i, &nm, cfg.negative_model);
            for (bc, pb) in [(0.0, 1.0 - b), (1.0, b)] {
                for (dc, pd) in [(0.0, 1.0 - d), (1.0, d)] {
                    let next = s.s[i] + cfg.alpha * bc * hp + cfg.beta * dc * hn;
                    *e += weight * pb * pd * next;
                }
            }
        }
    }
    Ok(expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::NegativeModel;

    fn state() -> StateVector {
        StateVector::new(vec![1.0, 2.0, 3.0])
    }

    fn cfg() -> ModelConfig {
        ModelConfig::new(NegativeModel::StateReversion, 0.25, 0.5).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let empty = SignedDigraph::empty(3).unwrap();
        for policy in [
            InteractionPolicy::per_arc(0.5).unwrap(),
            InteractionPolicy::gossip(),
            InteractionPolicy::full(),
        ] {
            let e =
                one_step_expectation_oracle(&state(), &empty, &policy, 0.7, 0.3, &cfg()).unwrap();
            assert_eq!(e, state().s);
        }
        let g = SignedDigraph::new(3, [SignedArc::pos(0, 1), SignedArc::neg(2, 1)]).unwrap();
        let e =
            one_step_expectation_oracle(&state(), &g, &InteractionPolicy::full(), 0.0, 0.0, &cfg())
                .unwrap();
        assert_eq!(e, state().s);
    }

    #[test]
    fn single_positive_arc_by_hand() {
        let g = SignedDigraph::new(3, [SignedArc::pos(0, 1)]).unwrap();
        let policy = InteractionPolicy::per_arc(0.5).unwrap();
        let e = one_step_expectation_oracle(&state(), &g, &policy, 1.0, 0.0, &cfg()).unwrap();
        assert!((e[1] - 1.875).abs() < 1e-15);
        assert_eq!(e[0], 1.0);
        assert_eq!(e[2], 3.0);
    }

    #[test]
    fn gossip_averages_over_arcs() {
        // Node 1 moves only when arc (0,1) is chosen: 2 + 1/2 * 0.25 * (1 - 2).
        let g = SignedDigraph::new(3, [SignedArc::pos(0, 1), SignedArc::pos(1, 2)]).unwrap();
        let e = one_step_expectation_oracle(
            &state(),
            &g,
            &InteractionPolicy::gossip(),
            1.0,
            0.0,
            &cfg(),
        )
        .unwrap();
        assert!((e[1] - 1.875).abs() < 1e-15);
        assert!((e[2] - (3.0 - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn too_large() {
        let arcs = (0..5).flat_map(|i| {
            (0..5)
                .filter(move |&j| j != i)
                .map(move |j| SignedArc::pos(i, j))
        });
        let g = SignedDigraph::new(5, arcs).unwrap();
        let s = StateVector::new(vec![0.0; 5]);
        let err = one_step_expectation_oracle(&s, &g, &InteractionPolicy::full(), 0.5, 0.5, &cfg())
            .unwrap_err();
        assert_eq!(
            err,
            Error::TooLarge {
                arcs: 20,
                limit: 16
            }
        );
    }
}
