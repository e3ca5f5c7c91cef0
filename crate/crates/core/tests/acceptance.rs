//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stderr (outside the harness capture)
//! and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signet::dynamics::{run, NegativeModel};
use signet::graph::{is_strongly_balanced, positive_cluster_partition, Sign, SignedDigraph};
use signet::montecarlo::{
    run_montecarlo, write_metrics_csv, write_trajectory_csv, write_verdicts_csv,
};
use signet::sampling::AttentionSchedule;
use signet::scenario::{InitialState, ScenarioConfig};
use signet::schedule::GraphSchedule;
use signet::suites::{default_scenarios, run_suite, SuiteId, SuiteOutcome};

fn report(criterion: u32, what: &str, passed: bool, started: Instant, detail: &str) {
    let line = format!(
        "criterion {criterion:>2}: {} {what} ({:.1} s) {detail}\n",
        if passed { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn fact<'a>(o: &'a SuiteOutcome, key: &str) -> &'a str {
    o.facts
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("{} evidence lacks `{key}`", o.id))
}

fn only(id: SuiteId) -> ScenarioConfig {
    let mut s = default_scenarios(id);
    assert_eq!(s.len(), 1);
    s.remove(0)
}

fn suite(id: SuiteId) -> SuiteOutcome {
    run_suite(id, None).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn static_graph(cfg: &ScenarioConfig) -> &SignedDigraph {
    match &cfg.schedule {
        GraphSchedule::Static(g) => g,
        _ => panic!("expected a static schedule"),
    }
}

fn within(started: Instant, secs: u64) -> bool {
    started.elapsed() < Duration::from_secs(secs)
}

#[test]
fn criterion_01_nonexpansive_max() {
    let started = Instant::now();
    let cfg = only(SuiteId::L1);
    assert_eq!((cfg.n(), cfg.model.alpha, cfg.model.beta), (6, 0.08, 0.08));
    assert_eq!((cfg.num_runs, cfg.horizon, cfg.stride), (200, 2_000, 1));
    let o = suite(SuiteId::L1);
    let ok = o.passed && fact(&o, "violations") == "0" && within(started, 10);
    report(
        1,
        "M(t+1) <= M(t) on every step",
        ok,
        started,
        &format!("steps={}", fact(&o, "steps_checked")),
    );
    assert!(ok, "{}", o.render());
}

#[test]
fn criterion_02_bounded_shrink() {
    let started = Instant::now();
    let cfg = only(SuiteId::L5);
    assert_eq!((cfg.n(), cfg.model.alpha, cfg.model.beta), (3, 0.1, 2000.0));
    assert_eq!((cfg.num_runs, cfg.horizon, cfg.model.cap), (50, 200, 1e300));
    let o = suite(SuiteId::L5);
    let ok = o.passed && fact(&o, "violations") == "0" && within(started, 5);
    report(
        2,
        "M(t+1) >= M(t)/(2n) before overflow",
        ok,
        started,
        &format!("steps={}", fact(&o, "steps_checked")),
    );
    assert!(ok, "{}", o.render());
}

#[test]
fn criterion_03_state_reversion_converges() {
    let started = Instant::now();
    let cfg = only(SuiteId::T1);
    let g = static_graph(&cfg);
    assert!(g.has_positive() && g.has_negative());
    assert_eq!(
        (cfg.num_runs, cfg.horizon, cfg.detect.eps),
        (100, 50_000, 1e-6)
    );
    let o = suite(SuiteId::T1);
    let ok = o.passed && within(started, 120);
    let detail = format!(
        "converged={}/{} wilson_low={}",
        fact(&o, "converged.hits"),
        fact(&o, "converged.trials"),
        fact(&o, "converged.ci_low")
    );
    report(3, "state reversion converges", ok, started, &detail);
    assert!(ok, "{}", o.render());
}

#[test]
fn criterion_04_clustering() {
    let started = Instant::now();
    let balanced = only(SuiteId::T2i);
    let g = static_graph(&balanced);
    assert!(is_strongly_balanced(g).balanced && g.has_negative());
    let unbalanced = only(SuiteId::T2ii);
    assert!(!is_strongly_balanced(static_graph(&unbalanced)).balanced);

    let i = suite(SuiteId::T2i);
    let ii = suite(SuiteId::T2ii);
    let ok = i.passed && ii.passed;
    let detail = format!(
        "bipolar={}/{} all_zero={}/{}",
        fact(&i, "bipolar_among_converged.hits"),
        fact(&i, "bipolar_among_converged.trials"),
        fact(&ii, "all_limits_zero.hits"),
        fact(&ii, "all_limits_zero.trials")
    );
    report(
        4,
        "bipolar limits when balanced, zero limits otherwise",
        ok,
        started,
        &detail,
    );
    assert!(ok, "{}\n{}", i.render(), ii.render());
}

#[test]
fn criterion_05_divergence_and_no_survivor() {
    let started = Instant::now();
    let cfg = only(SuiteId::T3);
    assert_eq!(
        (cfg.n(), cfg.model.alpha, cfg.model.beta, cfg.num_runs),
        (3, 0.1, 2000.0, 100)
    );
    assert_eq!(cfg.init, InitialState::Uniform { lo: -1.0, hi: 1.0 });
    assert_eq!(cfg.detect.diverge_threshold, 1e8);
    let t3 = suite(SuiteId::T3);
    let p1 = suite(SuiteId::P1);
    let ok = t3.passed && p1.passed;
    let detail = format!(
        "crossed={}/{} no_survivor={}/{}",
        fact(&t3, "crossed.hits"),
        fact(&t3, "crossed.trials"),
        fact(&p1, "no_survivor_among_crossed.hits"),
        fact(&p1, "no_survivor_among_crossed.trials")
    );
    report(5, "M diverges and every node follows", ok, started, &detail);
    assert!(ok, "{}\n{}", t3.render(), p1.render());
}

#[test]
fn criterion_06_static_clusters() {
    let started = Instant::now();
    let i_cfg = only(SuiteId::T4i);
    let ii_cfg = only(SuiteId::T4ii);
    for c in [&i_cfg, &ii_cfg] {
        assert_eq!(
            c.model.negative_model,
            NegativeModel::RelativeStateReversion
        );
        assert_eq!((c.model.alpha, c.model.beta), (0.2, 1.0));
        assert_eq!(positive_cluster_partition(static_graph(c)).count(), 2);
    }
    assert_eq!(
        i_cfg.negative_attention,
        AttentionSchedule::PowerDecay { c: 1.0, gamma: 2.0 }
    );
    assert_eq!(ii_cfg.negative_attention, AttentionSchedule::Constant(0.1));
    assert_eq!(ii_cfg.init, InitialState::ClusterSpacing(1.0));
    assert_eq!(ii_cfg.detect.diverge_threshold, 1e6);

    let i = suite(SuiteId::T4i);
    let ii = suite(SuiteId::T4ii);
    let ok = i.passed && ii.passed;
    let detail = format!(
        "converged={}/{} gap_crossed={}/{}",
        fact(&i, "converged.hits"),
        fact(&i, "converged.trials"),
        fact(&ii, "gap_crossed.hits"),
        fact(&ii, "gap_crossed.trials")
    );
    report(
        6,
        "summable repulsion converges, constant repulsion splits",
        ok,
        started,
        &detail,
    );
    assert!(ok, "{}\n{}", i.render(), ii.render());
}

#[test]
fn criterion_07_gap_path_facts() {
    let started = Instant::now();
    let cfg = only(SuiteId::L10);
    let reference = only(SuiteId::T4i);
    assert_eq!(static_graph(&cfg), static_graph(&reference));
    assert_eq!(cfg.negative_attention, reference.negative_attention);
    assert_eq!((cfg.stride, cfg.num_runs), (1, 100));
    let o = suite(SuiteId::L10);
    let ok = o.passed && fact(&o, "violations") == "0";
    report(
        7,
        "H, h, gap monotone without repulsion",
        ok,
        started,
        &format!("steps={}", fact(&o, "steps_checked")),
    );
    assert!(ok, "{}", o.render());
}

#[test]
fn criterion_08_weak_consensus() {
    let started = Instant::now();
    let cfg = only(SuiteId::T5);
    assert_eq!((cfg.n(), cfg.k, cfg.horizon), (3, 1, 1_000_000));
    let o = suite(SuiteId::T5);
    let margin: f64 = fact(&o, "x_minus_y").parse().unwrap();
    assert!((0.0..=1.0).contains(&margin));
    let ok = o.passed && within(started, 300);
    let detail = format!(
        "x_minus_y={margin:.3e} gap_below_1e-4={}/{}",
        fact(&o, "weak_consensus.hits"),
        fact(&o, "weak_consensus.trials")
    );
    report(
        8,
        "weak consensus on a feasible grid point",
        ok,
        started,
        &detail,
    );
    assert!(ok, "{}", o.render());
}

#[test]
fn criterion_09_gap_divergence_and_no_survivor() {
    let started = Instant::now();
    let cfg = only(SuiteId::T6);
    assert_eq!((cfg.model.alpha, cfg.model.beta), (0.05, 1.0));
    assert_eq!(cfg.positive_attention, AttentionSchedule::Constant(0.01));
    assert_eq!(cfg.negative_attention, AttentionSchedule::Constant(0.5));
    assert_eq!(cfg.detect.diverge_threshold, 1e8);
    let t6 = suite(SuiteId::T6);
    let p2 = suite(SuiteId::P2);
    let ok = t6.passed && p2.passed;
    let detail = format!(
        "gap_crossed={}/{} all_pairs={}/{}",
        fact(&t6, "gap_crossed.hits"),
        fact(&t6, "gap_crossed.trials"),
        fact(&p2, "no_survivor_among_crossed.hits"),
        fact(&p2, "no_survivor_among_crossed.trials")
    );
    report(
        9,
        "gap diverges and every pair follows",
        ok,
        started,
        &detail,
    );
    assert!(ok, "{}\n{}", t6.render(), p2.render());
}

#[test]
fn criterion_10_cluster_consensus() {
    let started = Instant::now();
    let cfg = only(SuiteId::T7);
    assert_eq!(cfg.positive_attention, AttentionSchedule::Constant(0.5));
    assert_eq!(
        cfg.negative_attention,
        AttentionSchedule::PowerDecay { c: 1.0, gamma: 2.0 }
    );
    let o = suite(SuiteId::T7);
    let detail = format!(
        "agree={}/{}",
        fact(&o, "clusters_agree.hits"),
        fact(&o, "clusters_agree.trials")
    );
    report(
        10,
        "each positive cluster reaches consensus",
        o.passed,
        started,
        &detail,
    );
    assert!(o.passed, "{}", o.render());
}

#[test]
fn criterion_11_oracle_equivalence() {
    let started = Instant::now();
    let fixtures = default_scenarios(SuiteId::Oracle);
    assert_eq!(fixtures.len(), 6);
    for f in &fixtures {
        assert_eq!((f.n(), f.num_runs), (3, 200_000));
    }
    let o = suite(SuiteId::Oracle);
    let ok = o.passed && within(started, 10);
    report(
        11,
        "one-step Monte Carlo mean within 4 SE of exact",
        ok,
        started,
        "fixtures=6 draws=200000",
    );
    assert!(ok, "{}", o.render());
}

/// Every split with node 0 in `V1` and `V2` nonempty, in lexicographic order
/// of sorted `V1`; the first admissible one.
fn brute_balance(g: &SignedDigraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let mut splits: Vec<(Vec<usize>, Vec<usize>)> = (0u32..1 << (n - 1))
        .map(|mask| {
            let in_v1 = |v: usize| v == 0 || mask & (1 << (v - 1)) == 0;
            let v1 = (0..n).filter(|&v| in_v1(v)).collect();
            let v2 = (0..n).filter(|&v| !in_v1(v)).collect();
            (v1, v2)
        })
        .filter(|(_, v2): &(Vec<usize>, Vec<usize>)| !v2.is_empty())
        .collect();
    splits.sort();
    splits.into_iter().find(|(v1, _)| {
        g.arcs()
            .iter()
            .filter(|a| a.sign == Sign::Negative)
            .all(|a| v1.contains(&a.src) != v1.contains(&a.dst))
    })
}

/// Weak components of the positive arcs via transitive closure.
fn brute_clusters(g: &SignedDigraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for a in g.arcs().iter().filter(|a| a.sign == Sign::Positive) {
        reach[a.src][a.dst] = true;
        reach[a.dst][a.src] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| reach[i][j]).collect())
        .collect();
    clusters.sort();
    clusters.dedup();
    clusters
}

#[test]
fn criterion_12_structural_oracles() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut agree, mut balanced) = (0, 0);
    for _ in 0..500 {
        let n = rng.random_range(3..=8);
        let density = rng.random_range(0.1..0.9);
        let neg = rng.random_range(0.0..1.0);
        let g = SignedDigraph::random(n, density, neg, &mut rng).unwrap();
        let b = is_strongly_balanced(&g);
        let want = brute_balance(&g);
        balanced += usize::from(want.is_some());
        let mut clusters = positive_cluster_partition(&g).clusters().to_vec();
        clusters.sort();
        if b.balanced == want.is_some() && b.bipartition == want && clusters == brute_clusters(&g) {
            agree += 1;
        }
    }
    let ok = agree == 500;
    report(
        12,
        "balance and clusters match brute force",
        ok,
        started,
        &format!("agree={agree}/500 balanced={balanced}"),
    );
    assert!(ok);
}

fn csv_bytes(cfg: &ScenarioConfig) -> Vec<u8> {
    let mut out = Vec::new();
    for r in 0..cfg.num_runs.min(3) {
        let traj = run(cfg, r).unwrap();
        write_trajectory_csv(&traj, &mut out).unwrap();
        write_metrics_csv(&traj, &mut out).unwrap();
    }
    let batch = run_montecarlo(cfg, None).unwrap();
    write_verdicts_csv(&batch, cfg.n(), &mut out).unwrap();
    out
}

#[test]
fn criterion_13_reproducible_csv() {
    let started = Instant::now();
    let mut identical = 0;
    let mut total = 0;
    for id in SuiteId::ALL {
        for mut cfg in default_scenarios(id) {
            cfg.horizon = cfg.horizon.min(500);
            cfg.num_runs = cfg.num_runs.min(5);
            cfg.stride = cfg.stride.min(cfg.horizon);
            total += 1;
            if csv_bytes(&cfg) == csv_bytes(&cfg) {
                identical += 1;
            }
        }
    }
    let ok = identical == total;
    report(
        13,
        "equal seeds give byte-identical CSV",
        ok,
        started,
        &format!("scenarios={identical}/{total}"),
    );
    assert!(ok);
}
