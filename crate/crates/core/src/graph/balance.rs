use super::{Sign, SignSelector, SignedDigraph};

/// Outcome of the strong-balance test.
///
/// `bipartition` is `Some((v1, v2))` exactly when `balanced`; both sides are
/// sorted and nonempty, node 0 is always in `v1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceResult {
    pub balanced: bool,
    pub bipartition: Option<(Vec<usize>, Vec<usize>)>,
    /// The graph has no negative arcs, so any split qualifies.
    pub vacuous: bool,
}

/// Is there a split of the nodes into two nonempty sides such that every
/// negative arc runs between the sides?
///
/// Negative arcs are treated as undirected "different side" constraints and
/// 2-coloured component by component. Among all admissible splits the one
/// returned has node 0 in `V1` and the lexicographically smallest sorted `V1`.
pub fn is_strongly_balanced(g: &SignedDigraph) -> BalanceResult {
    let n = g.n();
    let adj = g.undirected_adjacency(SignSelector::NegativeOnly);
    let vacuous = !g.has_negative();

    // comp[v], colour[v] relative to the component's smallest member.
    let mut comp = vec![usize::MAX; n];
    let mut colour = vec![false; n];
    let mut comp_size = Vec::new();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = comp_size.len();
        comp[root] = id;
        let mut size = 1;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    colour[w] = !colour[v];
                    size += 1;
                    stack.push(w);
                } else if colour[w] == colour[v] {
                    return BalanceResult {
                        balanced: false,
                        bipartition: None,
                        vacuous,
                    };
                }
            }
        }
        comp_size.push(size);
    }

    // orientation[c]: whether colour `false` of component c lies in V1.
    let mut orientation: Vec<Option<bool>> = vec![None; comp_size.len()];
    orientation[comp[0]] = Some(true);
    let in_v1 =
        |v: usize, orientation: &[Option<bool>]| orientation[comp[v]].map(|o| o != colour[v]);

    for v in 1..n {
        if orientation[comp[v]].is_some() {
            continue;
        }
        // Every node below v is placed. If nothing above v is forced into V1
        // and every open component can sit entirely in V2, stopping here gives
        // a V1 that is a prefix of every alternative, hence smallest.
        let nothing_forced_above = ((v + 1)..n).all(|u| in_v1(u, &orientation) != Some(true));
        let open_are_singletons = (v..n)
            .filter(|&u| orientation[comp[u]].is_none())
            .all(|u| comp_size[comp[u]] == 1);
        if nothing_forced_above && open_are_singletons {
            for u in v..n {
                if orientation[comp[u]].is_none() {
                    orientation[comp[u]] = Some(colour[u]);
                }
            }
            break;
        }
        // Otherwise V1 continues past v, and taking v itself is smallest.
        orientation[comp[v]] = Some(!colour[v]);
    }

    let (v1, v2): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&v| in_v1(v, &orientation) == Some(true));
    debug_assert!(!v2.is_empty());
    debug_assert!(g
        .arcs()
        .iter()
        .filter(|a| a.sign == Sign::Negative)
        .all(|a| v1.contains(&a.src) != v1.contains(&a.dst)));
    BalanceResult {
        balanced: true,
        bipartition: Some((v1, v2)),
        vacuous,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SignedArc;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive oracle: all splits with 0 in V1 and V2 nonempty.
    fn brute_force(g: &SignedDigraph) -> Option<Vec<usize>> {
        let n = g.n();
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..(1 << (n - 1)) {
            let in_v1 = |v: usize| v == 0 || mask & (1 << (v - 1)) != 0;
            if (0..n).all(in_v1) {
                continue;
            }
            let ok = g
                .arcs()
                .iter()
                .filter(|a| a.sign == Sign::Negative)
                .all(|a| in_v1(a.src) != in_v1(a.dst));
            if ok {
                let v1: Vec<usize> = (0..n).filter(|&v| in_v1(v)).collect();
                if best.as_ref().is_none_or(|b| v1 < *b) {
                    best = Some(v1);
                }
            }
        }
        best
    }

    #[test]
    fn star_of_negatives_is_balanced() {
        let g = SignedDigraph::new(
            3,
            [
                SignedArc::neg(0, 1),
                SignedArc::neg(1, 0),
                SignedArc::neg(0, 2),
                SignedArc::neg(2, 0),
                SignedArc::pos(1, 2),
                SignedArc::pos(2, 1),
            ],
        )
        .unwrap();
        let r = is_strongly_balanced(&g);
        assert!(r.balanced && !r.vacuous);
        assert_eq!(r.bipartition, Some((vec![0], vec![1, 2])));
    }

    #[test]
    fn all_negative_triangle_is_unbalanced() {
        let arcs = (0..3).flat_map(|i| {
            (0..3)
                .filter(move |&j| j != i)
                .map(move |j| SignedArc::neg(i, j))
        });
        let r = is_strongly_balanced(&SignedDigraph::new(3, arcs).unwrap());
        assert!(!r.balanced);
        assert!(r.bipartition.is_none());
    }

    #[test]
    fn no_negative_arcs_is_vacuously_balanced() {
        let g = SignedDigraph::new(4, [SignedArc::pos(0, 1), SignedArc::pos(2, 3)]).unwrap();
        let r = is_strongly_balanced(&g);
        assert!(r.balanced && r.vacuous);
        assert_eq!(r.bipartition, Some((vec![0], vec![1, 2, 3])));
    }

    #[test]
    fn lexicographic_tie_break_prefers_small_second_member() {
        // Components {0,3 | 1} and {2 | 4}: V1 = {0,2,3} beats {0,3,4}.
        let g = SignedDigraph::new(
            5,
            [
                SignedArc::neg(0, 1),
                SignedArc::neg(1, 3),
                SignedArc::neg(2, 4),
            ],
        )
        .unwrap();
        let r = is_strongly_balanced(&g);
        assert_eq!(r.bipartition, Some((vec![0, 2, 3], vec![1, 4])));
        assert_eq!(brute_force(&g), Some(vec![0, 2, 3]));
    }

    #[test]
    fn agrees_with_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..400 {
            let n = 3 + trial % 8;
            let density = [0.15, 0.3, 0.6][trial % 3];
            let g = SignedDigraph::random(n, density, 0.4, &mut rng).unwrap();
            let r = is_strongly_balanced(&g);
            let oracle = brute_force(&g);
            assert_eq!(r.balanced, oracle.is_some(), "graph {g:?}");
            assert_eq!(r.bipartition.map(|p| p.0), oracle, "graph {g:?}");
        }
    }

    proptest! {
        // Turning a crossing negative arc positive removes a constraint, so
        // the graph stays balanced (or becomes vacuous).
        #[test]
        fn flipping_a_crossing_negative_arc_keeps_balance(seed in any::<u64>(), n in 3usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = SignedDigraph::random(n, 0.35, 0.3, &mut rng).unwrap();
            let r = is_strongly_balanced(&g);
            prop_assume!(r.balanced && !r.vacuous);
            let (v1, _) = r.bipartition.unwrap();
            for a in g.arcs().iter().filter(|a| a.sign == Sign::Negative) {
                prop_assert!(v1.contains(&a.src) != v1.contains(&a.dst));
                let h = g.with_flipped(a.src, a.dst).unwrap();
                let rh = is_strongly_balanced(&h);
                prop_assert!(rh.balanced);
                prop_assert_eq!(rh.vacuous, !h.has_negative());
                prop_assert_eq!(rh.bipartition.map(|p| p.0), brute_force(&h));
            }
        }
    }
}
