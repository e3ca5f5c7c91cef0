use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use signet::analyze::analyze_path;
use signet::dynamics::run;
use signet::metrics::classify_run;
use signet::montecarlo::{
    bipartition, run_montecarlo, write_metrics_csv, write_trajectory_csv, write_verdicts_csv,
};
use signet::scenario::{load_scenario, ScenarioConfig};
use signet::suites::{default_scenarios, run_suite, run_suite_on, SuiteId, SuiteOutcome};
use signet::Error;

#[derive(Parser)]
#[command(
    name = "signet",
    version,
    about = "Opinion dynamics on dynamic signed random networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report for a graph file or a scenario (.toml).
    Analyze {
        path: PathBuf,
        /// Window length for the assumption checks.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Execute one run of a scenario.
    Run {
        scenario: PathBuf,
        /// Directory for trajectory.csv and metrics.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the fully resolved configuration and exit.
        #[arg(long)]
        print_config: bool,
        /// Run index; selects the random streams.
        #[arg(long, default_value_t = 0)]
        run: u64,
    },
    /// Execute independent runs and aggregate their verdicts.
    Montecarlo {
        scenario: PathBuf,
        /// Override `run.num_runs`.
        #[arg(long)]
        runs: Option<u64>,
        /// Directory for verdicts.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite (or `all`).
    Suite {
        /// Suite id (T1, T2i, T2ii, T3, P1, T4i, T4ii, T5, T6, P2, T7, L1, L2, L5, L10, ORACLE) or `all`.
        id: String,
        /// Use this scenario instead of the suite's defaults.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Override the number of runs (draws, for ORACLE).
        #[arg(long)]
        runs: Option<u64>,
        /// Directory for the evidence bundle.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the Monte Carlo one-step mean with exact enumeration.
    Oracle {
        /// A scenario file, or a built-in fixture `<sr|rsr>-<per_arc|gossip|full>`.
        fixture: String,
        /// Number of one-step draws (default 200000).
        #[arg(long)]
        draws: Option<u64>,
    },
}

/// 0 = success or pass, 1 = fail, 2 = configuration error.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let config = e.is_config_error() || matches!(e, Error::AssumptionViolated(_));
            ExitCode::from(if config { 2 } else { 1 })
        }
    }
}

fn dispatch(cmd: Command) -> signet::Result<Outcome> {
    match cmd {
        Command::Analyze { path, k } => {
            print!("{}", analyze_path(&path, k)?.text);
            Ok(Outcome::Pass)
        }
        Command::Run {
            scenario,
            out,
            print_config,
            run: index,
        } => {
            let cfg = load_scenario(&scenario)?;
            if print_config {
                print!("{}", cfg.to_toml());
                return Ok(Outcome::Pass);
            }
            cfg.validate()?;
            let traj = run(&cfg, index)?;
            let split = bipartition(&cfg)?;
            let split = split.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()));
            let verdict = classify_run(&traj, &cfg.detect, cfg.horizon, split);
            let last = traj
                .metrics
                .last()
                .expect("a trajectory records its initial state");
            println!("run = {index}");
            println!("seed = {}", cfg.seed);
            println!("termination = {}", traj.termination.name());
            println!("steps = {}", traj.steps());
            println!("verdict = {}", verdict.verdict);
            println!("final.M = {:?}", last.max_abs);
            println!("final.gap = {:?}", last.gap);
            if let Some(l) = &verdict.limits {
                println!("limits = {l:?}");
            }
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                write_with(&dir.join("trajectory.csv"), |w| {
                    write_trajectory_csv(&traj, w)
                })?;
                write_with(&dir.join("metrics.csv"), |w| write_metrics_csv(&traj, w))?;
            }
            Ok(Outcome::Pass)
        }
        Command::Montecarlo {
            scenario,
            runs,
            out,
        } => {
            let cfg = load_scenario(&scenario)?;
            let batch = run_montecarlo(&cfg, runs)?;
            println!("seed = {}", batch.seed);
            print!("{}", batch.report.render());
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                write_with(&dir.join("verdicts.csv"), |w| {
                    write_verdicts_csv(&batch, cfg.n(), w)
                })?;
            }
            Ok(Outcome::Pass)
        }
        Command::Suite {
            id,
            scenario,
            runs,
            out,
        } => {
            let ids: Vec<SuiteId> = if id.eq_ignore_ascii_case("all") {
                SuiteId::ALL.to_vec()
            } else {
                vec![id.parse()?]
            };
            let custom = scenario.as_deref().map(load_scenario).transpose()?;
            let mut all_passed = true;
            for id in ids {
                let outcome = match &custom {
                    Some(cfg) => run_suite_on(id, cfg, runs)?,
                    None => run_suite(id, runs)?,
                };
                println!(
                    "{} {} ({})",
                    if outcome.passed { "PASS" } else { "FAIL" },
                    id,
                    id.describe()
                );
                if let Some(dir) = &out {
                    write_evidence(&dir.join(id.name()), &outcome)?;
                }
                all_passed &= outcome.passed;
            }
            Ok(if all_passed {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Oracle { fixture, draws } => {
            let cfg = oracle_fixture(&fixture)?;
            let outcome = run_suite_on(SuiteId::Oracle, &cfg, draws)?;
            print!("{}", outcome.render());
            Ok(if outcome.passed {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
    }
}

fn oracle_fixture(name: &str) -> signet::Result<ScenarioConfig> {
    let path = Path::new(name);
    if path.exists() {
        return load_scenario(path);
    }
    default_scenarios(SuiteId::Oracle)
        .into_iter()
        .find(|c| format!("{}-{}", model_tag(c), c.interaction.name()) == name)
        .ok_or_else(|| {
            Error::validation(
                "fixture",
                format!("`{name}` is neither a file nor a built-in fixture"),
            )
        })
}

fn model_tag(cfg: &ScenarioConfig) -> &'static str {
    match cfg.model.negative_model {
        signet::dynamics::NegativeModel::StateReversion => "sr",
        signet::dynamics::NegativeModel::RelativeStateReversion => "rsr",
    }
}

fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> signet::Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// `evidence.txt` plus one scenario file per scenario; rerunning the suite
/// on those files reproduces the verdict.
fn write_evidence(dir: &Path, outcome: &SuiteOutcome) -> signet::Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_with(&dir.join("evidence.txt"), |w| {
        w.write_all(outcome.render().as_bytes())
    })?;
    for (k, cfg) in outcome.scenarios.iter().enumerate() {
        write_with(&dir.join(format!("scenario{k}.toml")), |w| {
            w.write_all(cfg.to_toml().as_bytes())
        })?;
    }
    Ok(())
}
