//! Verification suites: each binds scenarios to a predicate that the
//! corresponding result asserts, and refuses scenarios that do not meet the
//! result's hypotheses.

mod scenarios;

pub use scenarios::{
    blow_up, contraction, default_scenarios, fading_repulsion, opposed_cycles, oracle_graph,
    random_signed_graph, signed_path, two_camps, two_clusters,
};

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{
    initial_state, one_step_expectation_oracle, step, NegativeModel, StateVector, Termination,
    TrajectoryRecord,
};
use crate::error::{Error, Result};
use crate::graph::{is_strongly_balanced, positive_cluster_partition};
use crate::metrics::{
    detect_bipolar_clustering, detect_convergence, detect_divergence, detect_no_survivor,
    wilson_interval, window_coefficients, DerivedConstants, DivergenceMode, SurvivorMode,
};
use crate::montecarlo::map_runs;
use crate::sampling::{
    sample_attention, sample_interactions, AttentionSchedule, Purpose, RandomStream,
};
use crate::scenario::ScenarioConfig;
use crate::schedule::{check_assumptions, recurring_arcs, total_graph, Assumption, GraphSchedule};

/// Pass rule for almost-sure statements: the predicate must hold on at
/// least this fraction of runs...
pub const MIN_FRACTION: f64 = 0.95;
/// ...and the 95% Wilson lower bound must exceed this.
pub const MIN_WILSON_LOWER: f64 = 0.85;
/// Per-node (or per-pair) level for the no-survivor checks.
pub const SURVIVOR_THRESHOLD: f64 = 1e6;
/// Slack for pathwise inequalities.
pub const PATH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteId {
    T1,
    T2i,
    T2ii,
    T3,
    P1,
    T4i,
    T4ii,
    T5,
    T6,
    P2,
    T7,
    L1,
    L2,
    L5,
    L10,
    Oracle,
}

impl SuiteId {
    pub const ALL: [SuiteId; 16] = [
        SuiteId::T1,
        SuiteId::T2i,
        SuiteId::T2ii,
        SuiteId::T3,
        SuiteId::P1,
        SuiteId::T4i,
        SuiteId::T4ii,
        SuiteId::T5,
        SuiteId::T6,
        SuiteId::P2,
        SuiteId::T7,
        SuiteId::L1,
        SuiteId::L2,
        SuiteId::L5,
        SuiteId::L10,
        SuiteId::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::T1 => "T1",
            SuiteId::T2i => "T2i",
            SuiteId::T2ii => "T2ii",
            SuiteId::T3 => "T3",
            SuiteId::P1 => "P1",
            SuiteId::T4i => "T4i",
            SuiteId::T4ii => "T4ii",
            SuiteId::T5 => "T5",
            SuiteId::T6 => "T6",
            SuiteId::P2 => "P2",
            SuiteId::T7 => "T7",
            SuiteId::L1 => "L1",
            SuiteId::L2 => "L2",
            SuiteId::L5 => "L5",
            SuiteId::L10 => "L10",
            SuiteId::Oracle => "ORACLE",
        }
    }

    /// What the suite checks, in one line.
    pub fn describe(self) -> &'static str {
        match self {
            SuiteId::T1 => "state reversion with small weights converges",
            SuiteId::T2i => "balanced total graph: limits split into +y and -y",
            SuiteId::T2ii => "unbalanced total graph: all limits are zero",
            SuiteId::T3 => "large negative weight: max |s_i| diverges",
            SuiteId::P1 => "no survivor: once max |s_i| diverges every |s_i| does",
            SuiteId::T4i => "static clusters, summable negative attention: convergence",
            SuiteId::T4ii => "static clusters, constant negative attention: gap diverges",
            SuiteId::T5 => "window contraction dominates expansion: weak consensus",
            SuiteId::T6 => "rare positive attention: gap diverges",
            SuiteId::P2 => "no survivor: once the gap diverges every pairwise gap does",
            SuiteId::T7 => "cluster consensus under per-cluster spanning trees",
            SuiteId::L1 => "max |s_i| never increases",
            SuiteId::L2 => "contraction bound for nodes below the maximum",
            SuiteId::L5 => "max |s_i| shrinks by at most a factor 2n per step",
            SuiteId::L10 => "H, h and the gap are monotone when negative attention is off",
            SuiteId::Oracle => "Monte Carlo one-step mean matches exact enumeration",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Result of one suite over one or more scenarios. `facts` are `key = value`
/// evidence; together with the scenarios (which carry their seeds) they are
/// enough to reproduce the verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub id: SuiteId,
    pub passed: bool,
    pub facts: Vec<(String, String)>,
    pub scenarios: Vec<ScenarioConfig>,
}

impl SuiteOutcome {
    pub fn render(&self) -> String {
        let mut out = format!("suite = {}\npassed = {}\n", self.id, self.passed);
        for (k, v) in &self.facts {
            out += &format!("{k} = {v}\n");
        }
        out
    }
}

/// Runs the suite on its default scenarios. `runs` overrides the number of
/// runs (or draws, for the oracle) of every scenario.
pub fn run_suite(id: SuiteId, runs: Option<u64>) -> Result<SuiteOutcome> {
    let scenarios = default_scenarios(id);
    let mut facts = Vec::new();
    let mut passed = true;
    let multi = scenarios.len() > 1;
    for (k, cfg) in scenarios.iter().enumerate() {
        let o = run_suite_on(id, cfg, runs)?;
        passed &= o.passed;
        for (key, v) in o.facts {
            facts.push((
                if multi {
                    format!("fixture{k}.{key}")
                } else {
                    key
                },
                v,
            ));
        }
    }
    Ok(SuiteOutcome {
        id,
        passed,
        facts,
        scenarios,
    })
}

/// Runs the suite on a supplied scenario, after checking the hypotheses the
/// suite's result cites.
pub fn run_suite_on(id: SuiteId, cfg: &ScenarioConfig, runs: Option<u64>) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let runs = runs.unwrap_or(cfg.num_runs).max(1);
    let mut ev = Evidence::default();
    let passed = match id {
        SuiteId::L1 => check_nonexpansive(cfg, runs, &mut ev)?,
        SuiteId::L2 => check_contraction_bound(cfg, runs, &mut ev)?,
        SuiteId::L5 => check_bounded_shrink(cfg, runs, &mut ev)?,
        SuiteId::L10 => check_gap_monotone(cfg, runs, &mut ev)?,
        SuiteId::T1 => convergence_sr(cfg, runs, &mut ev)?,
        SuiteId::T2i => clustering_balanced(cfg, runs, &mut ev)?,
        SuiteId::T2ii => clustering_unbalanced(cfg, runs, &mut ev)?,
        SuiteId::T3 => divergence_sr(cfg, runs, &mut ev)?,
        SuiteId::P1 => no_survivor_sr(cfg, runs, &mut ev)?,
        SuiteId::T4i => convergence_rsr(cfg, runs, &mut ev)?,
        SuiteId::T4ii => divergence_rsr_clusters(cfg, runs, &mut ev)?,
        SuiteId::T5 => weak_consensus(cfg, runs, &mut ev)?,
        SuiteId::T6 => divergence_rsr(cfg, runs, &mut ev)?,
        SuiteId::P2 => no_survivor_rsr(cfg, runs, &mut ev)?,
        SuiteId::T7 => cluster_consensus(cfg, runs, &mut ev)?,
        SuiteId::Oracle => oracle(cfg, runs, &mut ev)?,
    };
    Ok(SuiteOutcome {
        id,
        passed,
        facts: ev.facts,
        scenarios: vec![cfg.clone()],
    })
}

#[derive(Default)]
struct Evidence {
    facts: Vec<(String, String)>,
}

impl Evidence {
    fn put(&mut self, k: &str, v: impl fmt::Display) {
        self.facts.push((k.to_string(), v.to_string()));
    }

    /// Records a success count under the almost-sure pass rule.
    fn rate(&mut self, key: &str, hits: u64, trials: u64) -> bool {
        let (lo, hi) = wilson_interval(hits, trials, crate::metrics::Z95);
        let frac = if trials == 0 {
            0.0
        } else {
            hits as f64 / trials as f64
        };
        self.put(&format!("{key}.hits"), hits);
        self.put(&format!("{key}.trials"), trials);
        self.put(&format!("{key}.fraction"), frac);
        self.put(&format!("{key}.ci_low"), format!("{lo:.6}"));
        self.put(&format!("{key}.ci_high"), format!("{hi:.6}"));
        trials > 0 && frac >= MIN_FRACTION && lo > MIN_WILSON_LOWER
    }

    /// Records a count that must be total.
    fn all(&mut self, key: &str, hits: u64, trials: u64) -> bool {
        self.put(&format!("{key}.hits"), hits);
        self.put(&format!("{key}.trials"), trials);
        trials > 0 && hits == trials
    }

    fn violations(&mut self, checked: u64, violations: u64, errors: u64) -> bool {
        self.put("steps_checked", checked);
        self.put("violations", violations);
        self.put("run_errors", errors);
        violations == 0 && errors == 0 && checked > 0
    }
}

fn refuse(msg: impl Into<String>) -> Error {
    Error::AssumptionViolated(msg.into())
}

fn gate(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(refuse(msg))
    }
}

fn require(cfg: &ScenarioConfig, needed: &[Assumption], ev: &mut Evidence) -> Result<()> {
    let report = check_assumptions(&cfg.schedule, &cfg.interaction, cfg.k, cfg.horizon, None);
    for a in needed {
        ev.put(&format!("assumption.{a}"), report.status(*a));
    }
    let failing = report.failing(needed);
    if let Some(a) = failing.first() {
        let witness = report
            .entry(*a)
            .and_then(|e| e.witness.clone())
            .unwrap_or_default();
        return Err(refuse(
            format!("{a} does not hold {witness}")
                .trim_end()
                .to_string(),
        ));
    }
    Ok(())
}

fn require_model(cfg: &ScenarioConfig, model: NegativeModel) -> Result<()> {
    gate(
        cfg.model.negative_model == model,
        &format!("requires the {model} model"),
    )
}

/// Both attention means constant and strictly inside (0, 1).
fn require_constant_attention(cfg: &ScenarioConfig) -> Result<(f64, f64)> {
    let open = |s: &AttentionSchedule| s.constant_value().filter(|&q| q > 0.0 && q < 1.0);
    match (open(&cfg.positive_attention), open(&cfg.negative_attention)) {
        (Some(b), Some(d)) => Ok((b, d)),
        _ => Err(refuse("requires constant attention means b, d in (0, 1)")),
    }
}

fn require_stride_one(cfg: &ScenarioConfig) -> Result<()> {
    if cfg.stride == 1 {
        Ok(())
    } else {
        Err(Error::validation(
            "record.stride",
            "pathwise checks need every slot recorded",
        ))
    }
}

fn degree(cfg: &ScenarioConfig) -> f64 {
    (cfg.n() - 1) as f64
}

/// Applies `check` to consecutive recorded states and counts failures.
fn pathwise<F>(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence, check: F) -> bool
where
    F: Fn(&TrajectoryRecord, usize) -> bool + Sync,
{
    let per_run = map_runs(cfg, runs, |_, traj| {
        traj.map(|t| {
            let steps = t.states.len().saturating_sub(1);
            let bad = (0..steps).filter(|&k| !check(&t, k)).count();
            (steps as u64, bad as u64)
        })
    });
    let (mut checked, mut bad, mut errors) = (0, 0, 0);
    for r in per_run {
        match r {
            Ok((c, b)) => {
                checked += c;
                bad += b;
            }
            Err(_) => errors += 1,
        }
    }
    ev.violations(checked, bad, errors)
}

fn check_nonexpansive(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require_stride_one(cfg)?;
    gate(
        cfg.model.alpha + cfg.model.beta <= 1.0 / degree(cfg),
        "requires alpha + beta <= 1/(n-1)",
    )?;
    Ok(pathwise(cfg, runs, ev, |t, k| {
        t.metrics[k + 1].max_abs <= t.metrics[k].max_abs + PATH_TOL
    }))
}

fn check_bounded_shrink(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require_stride_one(cfg)?;
    let n = cfg.n() as f64;
    gate(cfg.model.alpha < 1.0 / (2.0 * n), "requires alpha < 1/(2n)")?;
    gate(
        cfg.model.beta > 16.0 * n.powi(cfg.n() as i32 + 1),
        "requires beta > 16 n^(n+1)",
    )?;
    // Overflowed states are never committed, so every recorded pair is a
    // pre-overflow step.
    Ok(pathwise(cfg, runs, ev, |t, k| {
        t.metrics[k + 1].max_abs >= t.metrics[k].max_abs / (2.0 * n) - PATH_TOL
    }))
}

fn check_gap_monotone(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    require_stride_one(cfg)?;
    gate(
        cfg.model.alpha <= 1.0 / degree(cfg),
        "requires alpha <= 1/(n-1)",
    )?;
    let growth = 1.0 + 2.0 * cfg.model.beta * degree(cfg);
    Ok(pathwise(cfg, runs, ev, |t, k| {
        let (a, b) = (&t.metrics[k], &t.metrics[k + 1]);
        let expands_ok = b.gap <= growth * a.gap + PATH_TOL;
        if t.coins[t.states[k].t as usize].negative {
            expands_ok
        } else {
            expands_ok
                && b.max <= a.max + PATH_TOL
                && b.min >= a.min - PATH_TOL
                && b.gap <= a.gap + PATH_TOL
        }
    }))
}

fn check_contraction_bound(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require_stride_one(cfg)?;
    let c = DerivedConstants::new(cfg.n(), cfg.model.alpha, cfg.model.beta, cfg.k);
    gate(
        c.gamma_star > 0.0 && c.gamma_star < 1.0,
        "requires gamma* = 1 - (alpha + beta)(n-1) in (0, 1)",
    )?;
    ev.put("gamma_star", c.gamma_star);
    let gamma = c.gamma_star;
    let per_run = map_runs(cfg, runs, |_, traj| {
        traj.map(|t| {
            let len = t.states.len();
            let (mut checked, mut bad) = (0u64, 0u64);
            // Ten anchor slots per run, every node, every later slot.
            for anchor in (0..len).step_by((len / 10).max(1)) {
                let m = t.metrics[anchor].max_abs;
                if m == 0.0 {
                    continue;
                }
                for i in 0..t.n() {
                    let zeta = t.states[anchor].s[i].abs() / m;
                    let mut g = 1.0;
                    for later in &t.states[anchor..] {
                        let bound = (1.0 - (1.0 - zeta) * g) * m + 1e-9;
                        checked += 1;
                        if later.s[i].abs() > bound {
                            bad += 1;
                        }
                        g *= gamma;
                    }
                }
            }
            (checked, bad)
        })
    });
    let (mut checked, mut bad, mut errors) = (0, 0, 0);
    for r in per_run {
        match r {
            Ok((c, b)) => {
                checked += c;
                bad += b;
            }
            Err(_) => errors += 1,
        }
    }
    Ok(ev.violations(checked, bad, errors))
}

fn convergence_sr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A2], ev)?;
    gate(
        cfg.model.alpha + cfg.model.beta <= 1.0 / degree(cfg),
        "requires alpha + beta <= 1/(n-1)",
    )?;
    require_constant_attention(cfg)?;
    let window = cfg.detect.window_for(cfg.horizon);
    let (eps, tol) = (cfg.detect.eps, cfg.detect.cluster_eps);
    let results = map_runs(cfg, runs, |_, traj| {
        traj.ok().and_then(|t| {
            detect_convergence(&t, window, eps).map(|l| (l, t.metrics.last().map(|m| m.max_abs)))
        })
    });
    let converged = results.iter().flatten().count() as u64;
    // Every limit sits at +-M*, with M* estimated by the final M.
    let symmetric = results
        .iter()
        .flatten()
        .filter(|(l, m)| l.iter().all(|x| (x.abs() - m.unwrap_or(0.0)).abs() < tol))
        .count() as u64;
    ev.put("window", window);
    ev.put("eps", eps);
    let a = ev.rate("converged", converged, runs);
    let b = ev.rate("limits_at_plus_minus_m_star", symmetric, converged);
    Ok(a && b)
}

fn clustering_gate(cfg: &ScenarioConfig, ev: &mut Evidence) -> Result<crate::graph::BalanceResult> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A2, Assumption::A3], ev)?;
    gate(
        cfg.model.alpha + cfg.model.beta <= 1.0 / degree(cfg),
        "requires alpha + beta <= 1/(n-1)",
    )?;
    require_constant_attention(cfg)?;
    let total = total_graph(&cfg.schedule, cfg.horizon)?;
    gate(
        total.graph.has_negative(),
        "total graph needs a negative arc",
    )?;
    let recurring = recurring_arcs(&cfg.schedule, cfg.horizon);
    let every_negative_recurs = total
        .graph
        .arcs()
        .iter()
        .filter(|a| a.sign == crate::graph::Sign::Negative)
        .all(|a| recurring.iter().any(|r| r.src == a.src && r.dst == a.dst));
    gate(every_negative_recurs, "every negative arc must recur")?;
    let balance = is_strongly_balanced(&total.graph);
    ev.put("balanced", balance.balanced);
    Ok(balance)
}

fn clustering_balanced(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    let balance = clustering_gate(cfg, ev)?;
    gate(balance.balanced, "requires a strongly balanced total graph")?;
    let (v1, v2) = balance
        .bipartition
        .expect("balanced graphs carry a bipartition");
    ev.put("v1", format!("{v1:?}"));
    ev.put("v2", format!("{v2:?}"));
    let window = cfg.detect.window_for(cfg.horizon);
    let (eps, cluster_eps) = (cfg.detect.eps, cfg.detect.cluster_eps);
    let results = map_runs(cfg, runs, |_, traj| {
        let t = traj.ok()?;
        let limits = detect_convergence(&t, window, eps)?;
        let v = detect_bipolar_clustering(&limits, (&v1, &v2), cluster_eps, Some(&t.initial().s));
        Some(matches!(
            v,
            crate::metrics::BipolarVerdict::Match {
                within_l1_bound: Some(true),
                ..
            }
        ))
    });
    let converged = results.iter().flatten().count() as u64;
    let bipolar = results.iter().flatten().filter(|&&m| m).count() as u64;
    ev.put("converged", converged);
    Ok(ev.rate("bipolar_among_converged", bipolar, converged))
}

fn clustering_unbalanced(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    let balance = clustering_gate(cfg, ev)?;
    gate(
        !balance.balanced,
        "requires a total graph that is not strongly balanced",
    )?;
    let window = cfg.detect.window_for(cfg.horizon);
    let (eps, zero) = (cfg.detect.eps, cfg.detect.cluster_eps);
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok()
            .and_then(|t| detect_convergence(&t, window, eps))
            .is_some_and(|l| l.iter().all(|x| x.abs() < zero))
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("all_limits_zero", hits, runs))
}

fn divergence_sr_gate(
    cfg: &ScenarioConfig,
    ev: &mut Evidence,
    needed: &[Assumption],
) -> Result<()> {
    require_model(cfg, NegativeModel::StateReversion)?;
    require(cfg, needed, ev)?;
    require_constant_attention(cfg)?;
    Ok(())
}

fn divergence_sr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    let needed = [
        Assumption::A1,
        Assumption::A4,
        Assumption::A5,
        Assumption::A6,
    ];
    divergence_sr_gate(cfg, ev, &needed)?;
    gate(
        cfg.model.alpha <= 1.0 / (2.0 * cfg.n() as f64),
        "requires alpha in [0, 1/(2n)]",
    )?;
    let threshold = cfg.detect.diverge_threshold;
    ev.put("threshold", threshold);
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok().is_some_and(|t| {
            detect_divergence(&t, threshold, DivergenceMode::MaxAbs).is_some()
                || matches!(t.termination, Termination::NumericOverflow { .. })
        })
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("crossed", hits, runs))
}

fn no_survivor(
    cfg: &ScenarioConfig,
    runs: u64,
    ev: &mut Evidence,
    mode: SurvivorMode,
) -> Result<bool> {
    require_stride_one(cfg)?;
    let (metric, threshold) = (
        match mode {
            SurvivorMode::Nodes => DivergenceMode::MaxAbs,
            SurvivorMode::Pairs => DivergenceMode::MaxGap,
        },
        cfg.detect.diverge_threshold,
    );
    ev.put("threshold", threshold);
    ev.put("member_threshold", SURVIVOR_THRESHOLD);
    let results = map_runs(cfg, runs, |_, traj| {
        let t = traj.ok()?;
        detect_divergence(&t, threshold, metric)?;
        Some(detect_no_survivor(&t, SURVIVOR_THRESHOLD, mode).all_crossed())
    });
    let crossed = results.iter().flatten().count() as u64;
    let all = results.iter().flatten().filter(|&&a| a).count() as u64;
    Ok(ev.all("no_survivor_among_crossed", all, crossed))
}

fn no_survivor_sr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    divergence_sr_gate(cfg, ev, &[Assumption::A1, Assumption::A2, Assumption::A6])?;
    no_survivor(cfg, runs, ev, SurvivorMode::Nodes)
}

fn static_clusters_gate(cfg: &ScenarioConfig, ev: &mut Evidence) -> Result<()> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    gate(
        matches!(cfg.schedule, GraphSchedule::Static(_)),
        "requires a static graph",
    )?;
    require(cfg, &[Assumption::A1, Assumption::A9], ev)?;
    gate(
        cfg.model.alpha > 0.0 && cfg.model.alpha < 1.0 / degree(cfg),
        "requires alpha in (0, 1/(n-1))",
    )
}

fn convergence_rsr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    static_clusters_gate(cfg, ev)?;
    gate(
        cfg.negative_attention.summable() == Some(true),
        "requires summable negative attention",
    )?;
    let window = cfg.detect.window_for(cfg.horizon);
    let eps = cfg.detect.eps;
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok()
            .and_then(|t| detect_convergence(&t, window, eps))
            .is_some()
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("converged", hits, runs))
}

fn divergence_rsr_clusters(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    static_clusters_gate(cfg, ev)?;
    gate(
        cfg.negative_attention.summable() == Some(false),
        "requires non-summable negative attention",
    )?;
    let total = total_graph(&cfg.schedule, cfg.horizon)?;
    gate(
        positive_cluster_partition(&total.graph).count() >= 2,
        "requires at least two positive clusters",
    )?;
    let threshold = cfg.detect.diverge_threshold;
    ev.put("threshold", threshold);
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok()
            .is_some_and(|t| detect_divergence(&t, threshold, DivergenceMode::MaxGap).is_some())
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("gap_crossed", hits, runs))
}

/// A feasible `(b, d, beta)` for the weak-consensus condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasiblePoint {
    pub b: f64,
    pub d: f64,
    pub beta: f64,
    /// `X - Y` for the (single) window of constant attention.
    pub margin: f64,
}

const GRID_B: [f64; 4] = [0.9, 0.5, 0.7, 0.99];
const GRID_D: [f64; 5] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2];
const GRID_BETA: [f64; 4] = [0.05, 0.1, 0.5, 1.0];

/// Points of a small `(b, d, beta)` grid where `0 < X - Y <= 1`, for the
/// scenario's graph, `alpha`, `K` and per-arc probabilities. With constant
/// attention every window has the same coefficients, so `sum (X - Y)`
/// diverges exactly when the margin is positive. The scenario's own
/// parameters come first when they are feasible.
pub fn weak_consensus_grid(cfg: &ScenarioConfig) -> Vec<FeasiblePoint> {
    let report = check_assumptions(&cfg.schedule, &cfg.interaction, cfg.k, cfg.horizon, None);
    let Some(p) = report.p_lower else {
        return Vec::new();
    };
    let own = (
        cfg.positive_attention.constant_value(),
        cfg.negative_attention.constant_value(),
    );
    let mut points = Vec::new();
    let candidates = own
        .0
        .zip(own.1)
        .map(|(b, d)| (b, d, cfg.model.beta))
        .into_iter()
        .chain(GRID_B.iter().flat_map(|&b| {
            GRID_D
                .iter()
                .flat_map(move |&d| GRID_BETA.iter().map(move |&beta| (b, d, beta)))
        }));
    for (b, d, beta) in candidates {
        let Ok(w) = window_coefficients(
            cfg.n(),
            cfg.k,
            cfg.model.alpha,
            beta,
            p,
            &AttentionSchedule::Constant(b),
            &AttentionSchedule::Constant(d),
            0,
        ) else {
            return Vec::new();
        };
        let margin = w.x - w.y;
        let point = FeasiblePoint { b, d, beta, margin };
        if margin > 0.0 && margin <= 1.0 && !points.contains(&point) {
            points.push(point);
        }
    }
    points
}

fn weak_consensus(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A7], ev)?;
    gate(
        cfg.model.alpha > 0.0 && cfg.model.alpha < 1.0 / degree(cfg),
        "requires alpha in (0, 1/(n-1))",
    )?;
    let (b, d) = require_constant_attention(cfg)?;
    let grid = weak_consensus_grid(cfg);
    ev.put("grid.feasible_points", grid.len());
    let own = grid
        .iter()
        .find(|p| p.b == b && p.d == d && p.beta == cfg.model.beta)
        .copied();
    let Some(point) = own else {
        return Err(refuse(if grid.is_empty() {
            "no feasible (b, d, beta) on the search grid at this n and K"
        } else {
            "the scenario's (b, d, beta) violate 0 <= X - Y <= 1 with a positive margin"
        }));
    };
    ev.put("x_minus_y", point.margin);
    let gap = cfg.detect.cluster_eps;
    ev.put("gap_threshold", gap);
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok()
            .is_some_and(|t| t.metrics.last().is_some_and(|m| m.gap < gap))
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("weak_consensus", hits, runs))
}

fn divergence_rsr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A6, Assumption::A8], ev)?;
    gate(
        cfg.model.alpha < 1.0 / (2.0 * degree(cfg)),
        "requires alpha in [0, 1/(2(n-1)))",
    )?;
    require_constant_attention(cfg)?;
    let threshold = cfg.detect.diverge_threshold;
    ev.put("threshold", threshold);
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok()
            .is_some_and(|t| detect_divergence(&t, threshold, DivergenceMode::MaxGap).is_some())
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("gap_crossed", hits, runs))
}

fn no_survivor_rsr(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A4, Assumption::A6], ev)?;
    require_constant_attention(cfg)?;
    no_survivor(cfg, runs, ev, SurvivorMode::Pairs)
}

fn cluster_consensus(cfg: &ScenarioConfig, runs: u64, ev: &mut Evidence) -> Result<bool> {
    require_model(cfg, NegativeModel::RelativeStateReversion)?;
    require(cfg, &[Assumption::A1, Assumption::A3, Assumption::A9], ev)?;
    gate(
        cfg.model.alpha > 0.0 && cfg.model.alpha < 1.0 / degree(cfg),
        "requires alpha in (0, 1/(n-1))",
    )?;
    // Sum J(m) diverges for a constant positive mean; summable d with a
    // constant b also makes W(m)/J(m) vanish.
    gate(
        cfg.positive_attention
            .constant_value()
            .is_some_and(|b| b > 0.0),
        "requires a constant positive attention mean b > 0",
    )?;
    gate(
        cfg.negative_attention.summable() == Some(true),
        "requires summable negative attention",
    )?;
    let total = total_graph(&cfg.schedule, cfg.horizon)?;
    let partition = positive_cluster_partition(&total.graph);
    ev.put("clusters", format!("{:?}", partition.clusters()));
    let tol = cfg.detect.cluster_eps;
    let hits = map_runs(cfg, runs, |_, traj| {
        traj.ok().is_some_and(|t| {
            let s = &t.last().s;
            partition.clusters().iter().all(|c| {
                let (lo, hi) = c
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                        (lo.min(s[i]), hi.max(s[i]))
                    });
                hi - lo < tol
            })
        })
    })
    .into_iter()
    .filter(|&h| h)
    .count() as u64;
    Ok(ev.rate("clusters_agree", hits, runs))
}

/// Mean of `s(1)` over `draws` independent one-step draws against the exact
/// expectation, coordinate by coordinate, within four standard errors.
fn oracle(cfg: &ScenarioConfig, draws: u64, ev: &mut Evidence) -> Result<bool> {
    let g = cfg.schedule.graph_at(0);
    let s0 = StateVector::new(initial_state(cfg, 0)?);
    let (b, d) = (
        cfg.positive_attention.mean_at(0),
        cfg.negative_attention.mean_at(0),
    );
    let exact = one_step_expectation_oracle(&s0, g, &cfg.interaction, b, d, &cfg.model)?;
    let n = s0.n();
    let (mut sum, mut sq) = (vec![0.0; n], vec![0.0; n]);
    for draw in 0..draws {
        let base = RandomStream::new(cfg.seed, draw, 0, Purpose::Arcs);
        let sample = sample_interactions(g, &cfg.interaction, base);
        let bc = sample_attention(
            &cfg.positive_attention,
            0,
            base.at(0, Purpose::PositiveAttention),
        );
        let dc = sample_attention(
            &cfg.negative_attention,
            0,
            base.at(0, Purpose::NegativeAttention),
        );
        let next = step(&s0, &sample, bc, dc, &cfg.model)?;
        for i in 0..n {
            sum[i] += next.s[i];
            sq[i] += next.s[i] * next.s[i];
        }
    }
    ev.put("policy", cfg.interaction.name());
    ev.put("model", cfg.model.negative_model);
    ev.put("draws", draws);
    let m = draws as f64;
    let mut ok = true;
    for i in 0..n {
        let mean = sum[i] / m;
        let var = (sq[i] / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
        let se = (var / m).sqrt();
        let diff = (mean - exact[i]).abs();
        let pass = if se == 0.0 {
            diff <= PATH_TOL
        } else {
            diff <= 4.0 * se
        };
        ev.put(&format!("node{i}.exact"), exact[i]);
        ev.put(&format!("node{i}.mean"), mean);
        ev.put(&format!("node{i}.se"), se);
        ok &= pass;
    }
    Ok(ok)
}
