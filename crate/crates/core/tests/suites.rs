use signet::dynamics::ModelConfig;
use signet::scenario::parse_scenario;
use signet::suites::{
    contraction, default_scenarios, run_suite_on, two_camps, weak_consensus_grid, SuiteId,
};
use signet::Error;

#[test]
fn suite_ids_round_trip_through_their_names() {
    for id in SuiteId::ALL {
        assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
    }
    assert_eq!("oracle".parse::<SuiteId>().unwrap(), SuiteId::Oracle);
    assert!(matches!(
        "T9".parse::<SuiteId>(),
        Err(Error::UnknownSuite(_))
    ));
}

#[test]
fn unbalanced_suite_refuses_a_balanced_graph() {
    let cfg = default_scenarios(SuiteId::T2i).remove(0);
    let err = run_suite_on(SuiteId::T2ii, &cfg, Some(2)).unwrap_err();
    assert!(matches!(err, Error::AssumptionViolated(_)), "{err}");
}

#[test]
fn balanced_suite_refuses_a_frustrated_graph() {
    let mut cfg = default_scenarios(SuiteId::T2i).remove(0);
    cfg.schedule = signet::schedule::GraphSchedule::Static(two_camps(true));
    let err = run_suite_on(SuiteId::T2i, &cfg, Some(2)).unwrap_err();
    assert!(matches!(err, Error::AssumptionViolated(_)), "{err}");
}

#[test]
fn nonexpansive_suite_refuses_large_weights() {
    let mut cfg = contraction(100, 2);
    cfg.model = ModelConfig::new(cfg.model.negative_model, 0.2, 0.2).unwrap();
    let err = run_suite_on(SuiteId::L1, &cfg, None).unwrap_err();
    assert!(matches!(err, Error::AssumptionViolated(_)), "{err}");
}

#[test]
fn suites_refuse_the_wrong_model() {
    let cfg = contraction(100, 2);
    let err = run_suite_on(SuiteId::L10, &cfg, None).unwrap_err();
    assert!(matches!(err, Error::AssumptionViolated(_)), "{err}");
}

#[test]
fn nonexpansive_suite_passes_on_any_admissible_scenario() {
    let mut cfg = contraction(300, 10);
    cfg.model = ModelConfig::new(cfg.model.negative_model, 0.15, 0.05).unwrap();
    cfg.seed = 99;
    assert!(run_suite_on(SuiteId::L1, &cfg, None).unwrap().passed);
}

#[test]
fn weak_consensus_grid_lists_feasible_points_only() {
    let cfg = default_scenarios(SuiteId::T5).remove(0);
    let grid = weak_consensus_grid(&cfg);
    assert!(!grid.is_empty());
    assert!(grid.iter().all(|p| p.margin > 0.0 && p.margin <= 1.0));
    let first = grid[0];
    assert_eq!((first.b, first.d, first.beta), (0.9, 1e-6, 0.05));
}

/// The evidence bundle (scenario file plus facts) reproduces the verdict.
#[test]
fn evidence_reproduces_the_verdict() {
    for id in [SuiteId::L1, SuiteId::T3, SuiteId::T6, SuiteId::Oracle] {
        let mut cfg = default_scenarios(id).remove(0);
        cfg.num_runs = cfg.num_runs.min(20);
        cfg.horizon = cfg.horizon.min(500);
        let first = run_suite_on(id, &cfg, None).unwrap();
        let reloaded = parse_scenario(&first.scenarios[0].to_toml(), None).unwrap();
        let again = run_suite_on(id, &reloaded, None).unwrap();
        assert_eq!(first.render(), again.render(), "{id}");
    }
}
