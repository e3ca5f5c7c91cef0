//! Structural report for a graph file or a scenario's schedule.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{
    has_center_node, has_center_node_within, is_strongly_balanced, is_strongly_connected,
    is_weakly_connected, parse_graph, positive_cluster_partition, SignSelector, SignedDigraph,
};
use crate::sampling::InteractionPolicy;
use crate::scenario::parse_scenario;
use crate::schedule::{check_assumptions, is_sign_consistent, total_graph, GraphSchedule};

/// What was analyzed, plus the report as `key = value` lines.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralReport {
    pub total: SignedDigraph,
    pub text: String,
}

/// Reads a graph (plain arc list) or a scenario (`.toml`) and reports on its
/// total graph: positive clusters, balance, connectivity and center nodes per
/// sign selector, then assumptions A1 to A9 for window length `k` (the
/// scenario's own K when not given).
pub fn analyze_path(path: impl AsRef<Path>, k: Option<u64>) -> Result<StructuralReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "toml") {
        let cfg = parse_scenario(&text, path.parent())?;
        analyze_schedule(
            &cfg.schedule,
            &cfg.interaction,
            k.unwrap_or(cfg.k),
            cfg.horizon,
        )
    } else {
        let g = parse_graph(&text)?;
        analyze_schedule(
            &GraphSchedule::Static(g),
            &InteractionPolicy::full(),
            k.unwrap_or(1),
            1,
        )
    }
}

pub fn analyze_schedule(
    sched: &GraphSchedule,
    policy: &InteractionPolicy,
    k: u64,
    horizon: u64,
) -> Result<StructuralReport> {
    let (consistent, conflict) = is_sign_consistent(sched, horizon);
    if let (false, Some((src, dst))) = (consistent, conflict) {
        return Err(Error::SignConflict { src, dst });
    }
    let total = total_graph(sched, horizon)?;
    let g = &total.graph;
    let mut out = format!("nodes = {}\narcs = {}\n", g.n(), g.arc_count());
    out += &format!("total_graph.horizon_limited = {}\n", total.horizon_limited);

    let partition = positive_cluster_partition(g);
    out += &format!("positive_clusters = {:?}\n", partition.clusters());
    for (c, members) in partition.clusters().iter().enumerate() {
        let center = has_center_node_within(g, SignSelector::PositiveOnly, members);
        out += &format!("cluster{c}.center = {}\n", show(center));
    }

    let balance = is_strongly_balanced(g);
    out += &format!("strongly_balanced = {}\n", balance.balanced);
    if balance.vacuous {
        out += "strongly_balanced.vacuous = true\n";
    }
    if let Some((v1, v2)) = &balance.bipartition {
        out += &format!("bipartition.v1 = {v1:?}\nbipartition.v2 = {v2:?}\n");
    }

    for sel in SignSelector::EACH {
        out += &format!(
            "{sel}.strongly_connected = {}\n",
            is_strongly_connected(g, sel)
        );
        out += &format!("{sel}.weakly_connected = {}\n", is_weakly_connected(g, sel));
        out += &format!("{sel}.center = {}\n", show(has_center_node(g, sel)));
    }

    out += &check_assumptions(sched, policy, k, horizon, None).render();
    Ok(StructuralReport {
        total: total.graph,
        text: out,
    })
}

fn show(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |c| c.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(text: &str) -> String {
        let g = parse_graph(text).unwrap();
        analyze_schedule(&GraphSchedule::Static(g), &InteractionPolicy::full(), 1, 1)
            .unwrap()
            .text
    }

    #[test]
    fn balanced_triangle() {
        let r = report("n 3\n0 1 +\n1 2 -\n2 0 -\n");
        assert!(r.contains("strongly_balanced = true"));
        assert!(r.contains("bipartition.v1 = [0, 1]"));
        assert!(r.contains("positive_clusters = [[0, 1], [2]]"));
        assert!(r.contains("all.strongly_connected = true"));
        assert!(r.contains("positive.center = none"));
    }

    #[test]
    fn frustrated_triangle() {
        let r = report("n 3\n0 1 -\n1 2 -\n2 0 -\n");
        assert!(r.contains("strongly_balanced = false"));
        assert!(!r.contains("bipartition"));
        assert!(r.contains("assumptions.A5 = holds"));
        assert!(r.contains("assumptions.A4 = fails"));
    }
}
