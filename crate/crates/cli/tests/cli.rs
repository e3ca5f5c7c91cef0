use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn signet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_signet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

const SMALL: &str = r#"
[schedule]
graph_text = """
n 3
0 1 +
1 2 +
2 0 -
"""

[interaction]
kind = "per_arc"
p = 0.5

[model]
negative = "relative_state_reversion"
alpha = 0.2
beta = 0.05

[run]
horizon = 300
seed = 4
num_runs = 6
"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_reports_balance_and_clusters() {
    let graph = examples().join("two_camps.graph");
    let o = signet(&["analyze", graph.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("strongly_balanced = true"));
    assert!(out.contains("positive_clusters = [[0, 1, 2], [3, 4, 5]]"));
}

#[test]
fn analyze_rejects_malformed_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.graph", "n 3\n0 1 x\n");
    let o = signet(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn run_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "s.toml", SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = signet(&["run", &scenario, "--out", out.to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    for file in ["trajectory.csv", "metrics.csv"] {
        let x = fs::read(a.join(file)).unwrap();
        assert_eq!(x, fs::read(b.join(file)).unwrap());
        assert!(!x.is_empty());
    }
    let metrics = fs::read_to_string(a.join("metrics.csv")).unwrap();
    assert!(metrics.starts_with("t,M,H,h,gap\n"));
    assert_eq!(metrics.lines().count(), 302);
}

#[test]
fn printed_config_is_itself_a_valid_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "s.toml", SMALL);
    let echoed = stdout(&signet(&["run", &scenario, "--print-config"]));
    assert!(echoed.contains("[attention.positive]"));
    let again = write(dir.path(), "echo.toml", &echoed);
    assert_eq!(stdout(&signet(&["run", &again, "--print-config"])), echoed);
    assert_eq!(
        stdout(&signet(&["run", &again])),
        stdout(&signet(&["run", &scenario]))
    );
}

#[test]
fn montecarlo_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write(dir.path(), "s.toml", SMALL);
    let out = dir.path().join("mc");
    let o = signet(&[
        "montecarlo",
        &scenario,
        "--runs",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("runs = 4"));
    let csv = fs::read_to_string(out.join("verdicts.csv")).unwrap();
    assert!(csv.starts_with("run,seed,verdict,first_cross,limit_0,limit_1,limit_2\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        &SMALL.replace("alpha = 0.2", "alpha = -0.2"),
    );
    let o = signet(&["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model.alpha"));
    assert_eq!(signet(&["suite", "T42"]).status.code(), Some(2));
}

#[test]
fn suite_passes_and_writes_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ev");
    let o = signet(&["suite", "L5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS L5"));
    let evidence = fs::read_to_string(out.join("L5/evidence.txt")).unwrap();
    assert!(evidence.contains("violations = 0"));

    // The bundled scenario reproduces the evidence.
    let scenario = out.join("L5/scenario0.toml");
    let again = dir.path().join("again");
    signet(&[
        "suite",
        "L5",
        "--scenario",
        scenario.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read_to_string(again.join("L5/evidence.txt")).unwrap(),
        evidence
    );
}

#[test]
fn suite_refuses_scenarios_outside_its_hypotheses() {
    let scenario = examples().join("clustering.toml");
    let o = signet(&["suite", "T2ii", "--scenario", scenario.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("assumption violated"));
}

#[test]
fn failing_suite_exits_with_one() {
    // Twenty runs cannot push the Wilson lower bound above 0.85.
    let scenario = examples().join("blow_up.toml");
    let o = signet(&[
        "suite",
        "T3",
        "--scenario",
        scenario.to_str().unwrap(),
        "--runs",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL T3"));
}

#[test]
fn oracle_fixture_by_name() {
    let o = signet(&["oracle", "sr-gossip", "--draws", "50000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("policy = gossip"));
    assert_eq!(signet(&["oracle", "nope"]).status.code(), Some(2));
}
