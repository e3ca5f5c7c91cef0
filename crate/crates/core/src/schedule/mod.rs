//! The deterministic environment: which signed graph is in force at each slot.

mod assumptions;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{union_graph, SignedArc, SignedDigraph};

pub use assumptions::{check_assumptions, Assumption, AssumptionEntry, AssumptionReport, Status};

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSchedule {
    Static(SignedDigraph),
    /// Cycles through the graphs, one per slot.
    Periodic(Vec<SignedDigraph>),
    /// Explicit graphs at listed slots, `default` everywhere else.
    Scripted {
        script: BTreeMap<u64, SignedDigraph>,
        default: SignedDigraph,
    },
}

impl GraphSchedule {
    pub fn periodic(graphs: Vec<SignedDigraph>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::validation(
                "schedule.graphs",
                "periodic schedule needs at least one graph",
            ));
        }
        let s = GraphSchedule::Periodic(graphs);
        s.check_node_counts()?;
        Ok(s)
    }

    pub fn scripted(script: BTreeMap<u64, SignedDigraph>, default: SignedDigraph) -> Result<Self> {
        let s = GraphSchedule::Scripted { script, default };
        s.check_node_counts()?;
        Ok(s)
    }

    fn check_node_counts(&self) -> Result<()> {
        let n = self.n();
        if self.distinct_graphs().iter().any(|g| g.n() != n) {
            return Err(Error::validation(
                "schedule.graphs",
                "all graphs of a schedule must share the node count",
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match self {
            GraphSchedule::Static(g) => g.n(),
            GraphSchedule::Periodic(gs) => gs[0].n(),
            GraphSchedule::Scripted { default, .. } => default.n(),
        }
    }

    pub fn graph_at(&self, t: u64) -> &SignedDigraph {
        match self {
            GraphSchedule::Static(g) => g,
            GraphSchedule::Periodic(gs) => &gs[(t % gs.len() as u64) as usize],
            GraphSchedule::Scripted { script, default } => script.get(&t).unwrap_or(default),
        }
    }

    /// Static and periodic schedules are fully described by finitely many
    /// slots; a scripted one only up to whatever horizon is inspected.
    pub fn is_exact(&self) -> bool {
        !matches!(self, GraphSchedule::Scripted { .. })
    }

    /// Number of leading slots whose graphs determine the whole schedule,
    /// or, for scripted schedules, cover the script plus one default slot.
    pub fn span(&self) -> u64 {
        match self {
            GraphSchedule::Static(_) => 1,
            GraphSchedule::Periodic(gs) => gs.len() as u64,
            GraphSchedule::Scripted { script, .. } => {
                script.keys().next_back().map_or(1, |&last| last + 2)
            }
        }
    }

    pub(crate) fn distinct_graphs(&self) -> Vec<&SignedDigraph> {
        match self {
            GraphSchedule::Static(g) => vec![g],
            GraphSchedule::Periodic(gs) => gs.iter().collect(),
            GraphSchedule::Scripted { script, default } => {
                std::iter::once(default).chain(script.values()).collect()
            }
        }
    }

    /// Slots to scan for a property that must hold at every slot.
    fn scan_len(&self, horizon: u64) -> u64 {
        if self.is_exact() {
            self.span()
        } else {
            horizon.max(1)
        }
    }

    /// Union of the graphs at slots `t..t+k`.
    pub fn window_union(&self, t: u64, k: u64) -> Result<SignedDigraph> {
        let gs: Vec<SignedDigraph> = (t..t + k).map(|s| self.graph_at(s).clone()).collect();
        union_graph(&gs)
    }
}

/// Sign consistency over slots `0..horizon` (exact for static and periodic
/// schedules regardless of horizon). Returns the first conflicting arc.
pub fn is_sign_consistent(sched: &GraphSchedule, horizon: u64) -> (bool, Option<(usize, usize)>) {
    let mut signs = BTreeMap::new();
    for t in 0..sched.scan_len(horizon) {
        for a in sched.graph_at(t).arcs() {
            if let Some(prev) = signs.insert((a.src, a.dst), a.sign) {
                if prev != a.sign {
                    return (false, Some((a.src, a.dst)));
                }
            }
        }
    }
    (true, None)
}

/// Union of every arc set in force before `horizon`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalGraph {
    pub graph: SignedDigraph,
    /// True when the schedule is scripted and slots past the horizon were not seen.
    pub horizon_limited: bool,
}

pub fn total_graph(sched: &GraphSchedule, horizon: u64) -> Result<TotalGraph> {
    let gs: Vec<SignedDigraph> = (0..sched.scan_len(horizon))
        .map(|t| sched.graph_at(t).clone())
        .collect();
    Ok(TotalGraph {
        graph: union_graph(&gs)?,
        horizon_limited: !sched.is_exact(),
    })
}

/// Arcs of the total graph that recur at least once per schedule span, so
/// for exact schedules they appear infinitely often.
pub fn recurring_arcs(sched: &GraphSchedule, horizon: u64) -> Vec<SignedArc> {
    match sched {
        GraphSchedule::Scripted { default, .. } => default.arcs().to_vec(),
        _ => {
            let mut arcs: Vec<SignedArc> = (0..sched.scan_len(horizon))
                .flat_map(|t| sched.graph_at(t).arcs().to_vec())
                .collect();
            arcs.sort();
            arcs.dedup();
            arcs
        }
    }
}
