use std::collections::BTreeSet;
use std::fmt;

use super::{is_sign_consistent, total_graph, GraphSchedule};
use crate::graph::{
    has_center_node, has_center_node_within, is_strongly_connected, is_weakly_connected,
    positive_cluster_partition, PositiveClusterPartition, SignSelector, SignedDigraph,
};
use crate::sampling::InteractionPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assumption {
    /// Every arc of the slot graph is selected with probability at least `p_*`.
    A1,
    /// Window unions are strongly connected.
    A2,
    /// Signs never change; the total graph is well defined.
    A3,
    /// Positive window unions are strongly connected.
    A4,
    /// Negative window unions are strongly connected.
    A5,
    /// Arc selections are independent, each with probability at most `p^*` < 1.
    A6,
    /// Positive window unions have a spanning tree.
    A7,
    /// Negative window unions are weakly connected.
    A8,
    /// Within each positive cluster of the total graph, positive window unions
    /// have a spanning tree.
    A9,
}

impl Assumption {
    pub const ALL: [Assumption; 9] = [
        Assumption::A1,
        Assumption::A2,
        Assumption::A3,
        Assumption::A4,
        Assumption::A5,
        Assumption::A6,
        Assumption::A7,
        Assumption::A8,
        Assumption::A9,
    ];
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::NotApplicable => "not_applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionEntry {
    pub assumption: Assumption,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionReport {
    pub k: u64,
    pub horizon: u64,
    /// Window checks covered only `0..horizon` of a scripted schedule.
    pub horizon_limited: bool,
    /// Smallest marginal arc-selection probability (declared or observed).
    pub p_lower: Option<f64>,
    /// Largest marginal arc-selection probability (declared or observed).
    pub p_upper: Option<f64>,
    pub entries: Vec<AssumptionEntry>,
}

impl AssumptionReport {
    pub fn status(&self, a: Assumption) -> Status {
        self.entries
            .iter()
            .find(|e| e.assumption == a)
            .map_or(Status::NotApplicable, |e| e.status)
    }

    pub fn holds(&self, a: Assumption) -> bool {
        self.status(a) == Status::Holds
    }

    pub fn entry(&self, a: Assumption) -> Option<&AssumptionEntry> {
        self.entries.iter().find(|e| e.assumption == a)
    }

    /// Names of the listed assumptions that do not hold.
    pub fn failing(&self, required: &[Assumption]) -> Vec<Assumption> {
        required
            .iter()
            .copied()
            .filter(|&a| !self.holds(a))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "assumptions.k = {}\nassumptions.horizon = {}\nassumptions.horizon_limited = {}\n",
            self.k, self.horizon, self.horizon_limited
        );
        for e in &self.entries {
            out.push_str(&format!("assumptions.{} = {}", e.assumption, e.status));
            if let Some(w) = &e.witness {
                out.push_str(&format!("  # {w}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Union over slots `t..t+k` of the arcs admitted by `sel`. With `All`, a pair
/// carrying different signs at different slots counts once.
fn window_arcs(sched: &GraphSchedule, t: u64, k: u64, sel: SignSelector) -> SignedDigraph {
    let mut seen = BTreeSet::new();
    let mut arcs = Vec::new();
    for s in t..t + k {
        for a in sched.graph_at(s).selected(sel) {
            if seen.insert((a.src, a.dst)) {
                arcs.push(*a);
            }
        }
    }
    SignedDigraph::new(sched.n(), arcs).expect("window arcs are deduplicated")
}

/// Validate A1 to A9 for a schedule under an interaction policy.
///
/// Every window `[t, t+k-1]` is checked: for static and periodic schedules
/// one window per phase, which is exact; for scripted schedules every start
/// with `t + k <= horizon`, and the report is marked horizon-limited.
pub fn check_assumptions(
    sched: &GraphSchedule,
    policy: &InteractionPolicy,
    k: u64,
    horizon: u64,
    partition: Option<&PositiveClusterPartition>,
) -> AssumptionReport {
    let k = k.max(1);
    let starts: Vec<u64> = if sched.is_exact() {
        (0..sched.span()).collect()
    } else {
        (0..=horizon.saturating_sub(k)).collect()
    };
    let mut entries = Vec::new();

    // A1 and A6 are properties of the policy on the arcs that ever occur.
    let graphs = sched.distinct_graphs();
    let range = policy.probability_range(graphs.iter().copied());
    let p_lower = policy.lower.or(range.map(|r| r.0));
    let p_upper = policy.upper.or(range.map(|r| r.1));
    entries.push(match range {
        Some((lo, _)) if lo <= 0.0 => AssumptionEntry {
            assumption: Assumption::A1,
            status: Status::Fails,
            witness: Some("some arc is selected with probability 0".into()),
        },
        _ => AssumptionEntry {
            assumption: Assumption::A1,
            status: Status::Holds,
            witness: p_lower.map(|p| format!("p_lower = {p}")),
        },
    });

    let window_check =
        |a: Assumption, sel: SignSelector, pred: &dyn Fn(&SignedDigraph) -> bool| match starts
            .iter()
            .find(|&&t| !pred(&window_arcs(sched, t, k, sel)))
        {
            Some(t) => AssumptionEntry {
                assumption: a,
                status: Status::Fails,
                witness: Some(format!("window starting at t = {t} with K = {k}")),
            },
            None => AssumptionEntry {
                assumption: a,
                status: Status::Holds,
                witness: None,
            },
        };

    entries.push(window_check(Assumption::A2, SignSelector::All, &|g| {
        is_strongly_connected(g, SignSelector::All)
    }));

    let (consistent, conflict) = is_sign_consistent(sched, horizon);
    entries.push(AssumptionEntry {
        assumption: Assumption::A3,
        status: if consistent {
            Status::Holds
        } else {
            Status::Fails
        },
        witness: conflict.map(|(i, j)| format!("arc ({i}, {j}) changes sign")),
    });

    entries.push(window_check(
        Assumption::A4,
        SignSelector::PositiveOnly,
        &|g| is_strongly_connected(g, SignSelector::PositiveOnly),
    ));
    entries.push(window_check(
        Assumption::A5,
        SignSelector::NegativeOnly,
        &|g| is_strongly_connected(g, SignSelector::NegativeOnly),
    ));

    entries.push(if !policy.is_independent() {
        AssumptionEntry {
            assumption: Assumption::A6,
            status: Status::Fails,
            witness: Some(format!("{} selections are not independent", policy.name())),
        }
    } else if p_upper.is_some_and(|p| p >= 1.0) {
        AssumptionEntry {
            assumption: Assumption::A6,
            status: Status::Fails,
            witness: Some("some arc is selected with probability 1".into()),
        }
    } else {
        AssumptionEntry {
            assumption: Assumption::A6,
            status: Status::Holds,
            witness: p_upper.map(|p| format!("p_upper = {p}")),
        }
    });

    entries.push(window_check(
        Assumption::A7,
        SignSelector::PositiveOnly,
        &|g| has_center_node(g, SignSelector::PositiveOnly).is_some(),
    ));
    entries.push(window_check(
        Assumption::A8,
        SignSelector::NegativeOnly,
        &|g| is_weakly_connected(g, SignSelector::NegativeOnly),
    ));

    entries.push(if !consistent {
        AssumptionEntry {
            assumption: Assumption::A9,
            status: Status::NotApplicable,
            witness: Some("requires A3".into()),
        }
    } else {
        let computed;
        let partition = match partition {
            Some(p) => p,
            None => {
                let total = total_graph(sched, horizon).expect("sign consistent");
                computed = positive_cluster_partition(&total.graph);
                &computed
            }
        };
        window_check(Assumption::A9, SignSelector::PositiveOnly, &|g| {
            partition
                .clusters()
                .iter()
                .all(|c| has_center_node_within(g, SignSelector::PositiveOnly, c).is_some())
        })
    });

    AssumptionReport {
        k,
        horizon,
        horizon_limited: !sched.is_exact(),
        p_lower,
        p_upper,
        entries,
    }
}
