//! All randomness of the model: which arcs interact at a slot, and the two
//! global attention coins.

mod attention;
mod stream;

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedArc, SignedDigraph};

pub use attention::{sample_attention, summability_report, AttentionSchedule, SummabilityReport};
pub use stream::{Purpose, RandomStream};

#[derive(Clone, Debug, PartialEq)]
pub enum InteractionKind {
    /// Each arc of the slot graph is kept independently with probability `p`,
    /// or with its entry in `overrides`.
    PerArc {
        p: f64,
        overrides: BTreeMap<(usize, usize), f64>,
    },
    /// Exactly one arc, uniform over the slot graph.
    Gossip,
    /// Every arc of the slot graph.
    Full,
}

/// Distribution of the interacting arc set at each slot.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionPolicy {
    pub kind: InteractionKind,
    /// Declared lower bound on the per-arc selection probability.
    pub lower: Option<f64>,
    /// Declared upper bound on the per-arc selection probability.
    pub upper: Option<f64>,
}

impl InteractionPolicy {
    pub fn per_arc(p: f64) -> Result<Self> {
        let policy = InteractionPolicy {
            kind: InteractionKind::PerArc {
                p,
                overrides: BTreeMap::new(),
            },
            lower: None,
            upper: None,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn gossip() -> Self {
        InteractionPolicy {
            kind: InteractionKind::Gossip,
            lower: None,
            upper: None,
        }
    }

    pub fn full() -> Self {
        InteractionPolicy {
            kind: InteractionKind::Full,
            lower: None,
            upper: None,
        }
    }

    pub fn with_override(mut self, src: usize, dst: usize, p: f64) -> Result<Self> {
        match &mut self.kind {
            InteractionKind::PerArc { overrides, .. } => {
                overrides.insert((src, dst), p);
            }
            _ => {
                return Err(Error::validation(
                    "interaction.arc_p",
                    "per-arc probabilities need kind = \"per_arc\"",
                ))
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn with_bounds(mut self, lower: Option<f64>, upper: Option<f64>) -> Result<Self> {
        self.lower = lower;
        self.upper = upper;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |q: f64| (0.0..=1.0).contains(&q);
        if let InteractionKind::PerArc { p, overrides } = &self.kind {
            if !unit(*p) {
                return Err(Error::validation("interaction.p", "must lie in [0, 1]"));
            }
            if overrides.values().any(|&q| !unit(q)) {
                return Err(Error::validation(
                    "interaction.arc_p",
                    "entries must lie in [0, 1]",
                ));
            }
        }
        if let Some(lo) = self.lower {
            if !(lo > 0.0 && lo < 1.0) {
                return Err(Error::validation(
                    "interaction.p_lower",
                    "must lie in (0, 1)",
                ));
            }
        }
        if let Some(hi) = self.upper {
            if !(hi > 0.0 && hi < 1.0) {
                return Err(Error::validation(
                    "interaction.p_upper",
                    "must lie in (0, 1)",
                ));
            }
        }
        if let (Some(lo), Some(hi)) = (self.lower, self.upper) {
            if lo > hi {
                return Err(Error::validation("interaction.p_lower", "exceeds p_upper"));
            }
        }
        if let InteractionKind::PerArc { p, overrides } = &self.kind {
            let probs = || std::iter::once(*p).chain(overrides.values().copied());
            if let Some(lo) = self.lower {
                if probs().any(|q| q < lo) {
                    return Err(Error::validation(
                        "interaction.p_lower",
                        "a per-arc probability lies below the declared lower bound",
                    ));
                }
            }
            if let Some(hi) = self.upper {
                if probs().any(|q| q > hi) {
                    return Err(Error::validation(
                        "interaction.p_upper",
                        "a per-arc probability lies above the declared upper bound",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Marginal probability that `arc` of `g` is selected.
    pub fn arc_probability(&self, g: &SignedDigraph, src: usize, dst: usize) -> f64 {
        if g.sign_of(src, dst).is_none() {
            return 0.0;
        }
        match &self.kind {
            InteractionKind::PerArc { p, overrides } => {
                overrides.get(&(src, dst)).copied().unwrap_or(*p)
            }
            InteractionKind::Gossip => 1.0 / g.arc_count() as f64,
            InteractionKind::Full => 1.0,
        }
    }

    /// Whether arc selection events are mutually independent.
    pub fn is_independent(&self) -> bool {
        !matches!(self.kind, InteractionKind::Gossip)
    }

    /// Smallest and largest marginal selection probability over the arcs of
    /// the given graphs; `None` if they have no arcs.
    pub fn probability_range<'a>(
        &self,
        graphs: impl IntoIterator<Item = &'a SignedDigraph>,
    ) -> Option<(f64, f64)> {
        graphs
            .into_iter()
            .flat_map(|g| {
                g.arcs()
                    .iter()
                    .map(move |a| self.arc_probability(g, a.src, a.dst))
            })
            .fold(None, |acc, q| match acc {
                None => Some((q, q)),
                Some((lo, hi)) => Some((lo.min(q), hi.max(q))),
            })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            InteractionKind::PerArc { .. } => "per_arc",
            InteractionKind::Gossip => "gossip",
            InteractionKind::Full => "full",
        }
    }
}

/// The arcs that interact at one slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionSample {
    pub n: usize,
    pub arcs: Vec<SignedArc>,
    /// Gossip was asked to pick an arc from an empty graph.
    pub empty_gossip: bool,
}

impl InteractionSample {
    pub fn empty(n: usize) -> Self {
        InteractionSample {
            n,
            arcs: Vec::new(),
            empty_gossip: false,
        }
    }

    pub fn positive(&self) -> impl Iterator<Item = &SignedArc> + '_ {
        self.arcs.iter().filter(|a| a.sign == Sign::Positive)
    }

    pub fn negative(&self) -> impl Iterator<Item = &SignedArc> + '_ {
        self.arcs.iter().filter(|a| a.sign == Sign::Negative)
    }
}

pub fn sample_interactions(
    g: &SignedDigraph,
    policy: &InteractionPolicy,
    stream: RandomStream,
) -> InteractionSample {
    let n = g.n();
    match &policy.kind {
        InteractionKind::Full => InteractionSample {
            n,
            arcs: g.arcs().to_vec(),
            empty_gossip: false,
        },
        InteractionKind::Gossip => {
            if g.is_empty() {
                return InteractionSample {
                    n,
                    arcs: Vec::new(),
                    empty_gossip: true,
                };
            }
            let idx = stream.rng().random_range(0..g.arc_count());
            InteractionSample {
                n,
                arcs: vec![g.arcs()[idx]],
                empty_gossip: false,
            }
        }
        InteractionKind::PerArc { p, overrides } => {
            let mut rng = stream.rng();
            let arcs = g
                .arcs()
                .iter()
                .filter(|a| {
                    let q = if overrides.is_empty() {
                        *p
                    } else {
                        overrides.get(&(a.src, a.dst)).copied().unwrap_or(*p)
                    };
                    // One draw per arc, always, so arc k's fate depends only on draw k.
                    rng.random::<f64>() < q
                })
                .copied()
                .collect();
            InteractionSample {
                n,
                arcs,
                empty_gossip: false,
            }
        }
    }
}

/// In-neighbours of `i` along sampled positive and negative arcs.
pub fn neighbor_sets(sample: &InteractionSample, i: usize) -> (Vec<usize>, Vec<usize>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in sample.arcs.iter().filter(|a| a.dst == i) {
        match a.sign {
            Sign::Positive => pos.push(a.src),
            Sign::Negative => neg.push(a.src),
        }
    }
    (pos, neg)
}
