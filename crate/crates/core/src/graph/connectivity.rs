use super::{SignSelector, SignedDigraph};

fn reach_count(adj: &[Vec<usize>], start: usize, allowed: &[bool]) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

/// Every pair of nodes mutually reachable through the selected arcs.
pub fn is_strongly_connected(g: &SignedDigraph, sel: SignSelector) -> bool {
    let all = vec![true; g.n()];
    let fwd = g.out_adjacency(sel);
    if reach_count(&fwd, 0, &all) != g.n() {
        return false;
    }
    let mut bwd = vec![Vec::new(); g.n()];
    for (v, outs) in fwd.iter().enumerate() {
        for &w in outs {
            bwd[w].push(v);
        }
    }
    reach_count(&bwd, 0, &all) == g.n()
}

/// Connected once arc directions are dropped.
pub fn is_weakly_connected(g: &SignedDigraph, sel: SignSelector) -> bool {
    let all = vec![true; g.n()];
    reach_count(&g.undirected_adjacency(sel), 0, &all) == g.n()
}

/// Smallest node from which every node is reachable in the selected subgraph.
/// A graph has a spanning tree exactly when this exists.
pub fn has_center_node(g: &SignedDigraph, sel: SignSelector) -> Option<usize> {
    let nodes: Vec<usize> = (0..g.n()).collect();
    has_center_node_within(g, sel, &nodes)
}

/// Like [`has_center_node`] on the subgraph induced by `nodes`.
pub fn has_center_node_within(
    g: &SignedDigraph,
    sel: SignSelector,
    nodes: &[usize],
) -> Option<usize> {
    let mut allowed = vec![false; g.n()];
    for &v in nodes {
        allowed[v] = true;
    }
    let mut adj = g.out_adjacency(sel);
    for (v, outs) in adj.iter_mut().enumerate() {
        if !allowed[v] {
            outs.clear();
        }
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted
        .into_iter()
        .find(|&root| reach_count(&adj, root, &allowed) == nodes.len())
}
