//! Signed digraphs on a dense node set `0..n` and the structural queries the
//! dynamics depend on: positive clusters, strong balance, connectivity and
//! center nodes.

mod balance;
mod connectivity;
mod io;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub use balance::{is_strongly_balanced, BalanceResult};
pub use connectivity::{
    has_center_node, has_center_node_within, is_strongly_connected, is_weakly_connected,
};
pub use io::{parse_graph, read_graph_file};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Which arcs of a signed graph a structural query looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignSelector {
    All,
    PositiveOnly,
    NegativeOnly,
}

impl SignSelector {
    pub fn admits(self, sign: Sign) -> bool {
        match self {
            SignSelector::All => true,
            SignSelector::PositiveOnly => sign == Sign::Positive,
            SignSelector::NegativeOnly => sign == Sign::Negative,
        }
    }

    pub const EACH: [SignSelector; 3] = [
        SignSelector::All,
        SignSelector::PositiveOnly,
        SignSelector::NegativeOnly,
    ];
}

impl fmt::Display for SignSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignSelector::All => "all",
            SignSelector::PositiveOnly => "positive",
            SignSelector::NegativeOnly => "negative",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedArc {
    pub src: usize,
    pub dst: usize,
    pub sign: Sign,
}

impl SignedArc {
    pub fn new(src: usize, dst: usize, sign: Sign) -> Self {
        SignedArc { src, dst, sign }
    }

    pub fn pos(src: usize, dst: usize) -> Self {
        SignedArc::new(src, dst, Sign::Positive)
    }

    pub fn neg(src: usize, dst: usize) -> Self {
        SignedArc::new(src, dst, Sign::Negative)
    }
}

/// A simple signed digraph: no self-loops, at most one arc per ordered pair.
///
/// Arcs are kept sorted by `(src, dst)`, which fixes the iteration order used
/// by the samplers and therefore the meaning of every random draw.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedDigraph {
    n: usize,
    arcs: Vec<SignedArc>,
}

pub const MIN_NODES: usize = 3;

impl SignedDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = SignedArc>) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidGraph(format!(
                "node count {n} is below the minimum of {MIN_NODES}"
            )));
        }
        let mut arcs: Vec<SignedArc> = arcs.into_iter().collect();
        for a in &arcs {
            if a.src >= n || a.dst >= n {
                return Err(Error::InvalidGraph(format!(
                    "arc ({}, {}) references a node outside 0..{n}",
                    a.src, a.dst
                )));
            }
            if a.src == a.dst {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", a.src)));
            }
        }
        arcs.sort_by_key(|a| (a.src, a.dst));
        for w in arcs.windows(2) {
            if (w[0].src, w[0].dst) == (w[1].src, w[1].dst) {
                return Err(if w[0].sign != w[1].sign {
                    Error::SignConflict {
                        src: w[0].src,
                        dst: w[0].dst,
                    }
                } else {
                    Error::InvalidGraph(format!("duplicate arc ({}, {})", w[0].src, w[0].dst))
                });
            }
        }
        Ok(SignedDigraph { n, arcs })
    }

    pub fn empty(n: usize) -> Result<Self> {
        SignedDigraph::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[SignedArc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn sign_of(&self, src: usize, dst: usize) -> Option<Sign> {
        self.arcs
            .binary_search_by_key(&(src, dst), |a| (a.src, a.dst))
            .ok()
            .map(|i| self.arcs[i].sign)
    }

    pub fn selected(&self, sel: SignSelector) -> impl Iterator<Item = &SignedArc> + '_ {
        self.arcs.iter().filter(move |a| sel.admits(a.sign))
    }

    pub fn has_negative(&self) -> bool {
        self.arcs.iter().any(|a| a.sign == Sign::Negative)
    }

    pub fn has_positive(&self) -> bool {
        self.arcs.iter().any(|a| a.sign == Sign::Positive)
    }

    /// Copy of the graph keeping only the arcs admitted by `sel`.
    pub fn restricted(&self, sel: SignSelector) -> SignedDigraph {
        SignedDigraph {
            n: self.n,
            arcs: self.selected(sel).copied().collect(),
        }
    }

    /// Copy of the graph with the sign of `(src, dst)` replaced; `None` if absent.
    pub fn with_flipped(&self, src: usize, dst: usize) -> Option<SignedDigraph> {
        let i = self
            .arcs
            .binary_search_by_key(&(src, dst), |a| (a.src, a.dst))
            .ok()?;
        let mut g = self.clone();
        g.arcs[i].sign = g.arcs[i].sign.flipped();
        Some(g)
    }

    /// Out-adjacency of the arcs admitted by `sel`.
    pub(crate) fn out_adjacency(&self, sel: SignSelector) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for a in self.selected(sel) {
            adj[a.src].push(a.dst);
        }
        adj
    }

    /// Undirected adjacency of the arcs admitted by `sel`.
    pub(crate) fn undirected_adjacency(&self, sel: SignSelector) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for a in self.selected(sel) {
            adj[a.src].push(a.dst);
            adj[a.dst].push(a.src);
        }
        adj
    }

    /// Serialise in the line-oriented graph text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for a in &self.arcs {
            out.push_str(&format!("{} {} {}\n", a.src, a.dst, a.sign.symbol()));
        }
        out
    }

    /// Draw a random signed digraph: each ordered pair is an arc with
    /// probability `density`, negative with probability `negative_fraction`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        density: f64,
        negative_fraction: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut arcs = Vec::new();
        for src in 0..n {
            for dst in 0..n {
                if src != dst && rng.random_bool(density) {
                    let sign = if rng.random_bool(negative_fraction) {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    };
                    arcs.push(SignedArc::new(src, dst, sign));
                }
            }
        }
        SignedDigraph::new(n, arcs)
    }
}

/// Maximal weakly connected components of the positive subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveClusterPartition {
    clusters: Vec<Vec<usize>>,
}

impl PositiveClusterPartition {
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn count(&self) -> usize {
        self.clusters.len()
    }

    /// Index of the cluster holding `node`.
    pub fn cluster_of(&self, node: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&node))
    }
}

/// Clusters come out in ascending order of their smallest member, each sorted.
pub fn positive_cluster_partition(g: &SignedDigraph) -> PositiveClusterPartition {
    let adj = g.undirected_adjacency(SignSelector::PositiveOnly);
    let mut seen = vec![false; g.n()];
    let mut clusters = Vec::new();
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut members = vec![root];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    PositiveClusterPartition { clusters }
}

/// Union of the arc sets of a window of graphs on the same node set.
pub fn union_graph(gs: &[SignedDigraph]) -> Result<SignedDigraph> {
    let first = gs.first().ok_or(Error::EmptyWindow)?;
    let n = first.n();
    let mut arcs = std::collections::BTreeMap::new();
    for g in gs {
        if g.n() != n {
            return Err(Error::InvalidGraph(format!(
                "cannot unite graphs with {} and {} nodes",
                n,
                g.n()
            )));
        }
        for a in g.arcs() {
            match arcs.insert((a.src, a.dst), a.sign) {
                Some(prev) if prev != a.sign => {
                    return Err(Error::SignConflict {
                        src: a.src,
                        dst: a.dst,
                    })
                }
                _ => {}
            }
        }
    }
    SignedDigraph::new(
        n,
        arcs.into_iter()
            .map(|((src, dst), sign)| SignedArc::new(src, dst, sign)),
    )
}
