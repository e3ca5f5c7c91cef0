//! Batches of independent runs and their file outputs.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::dynamics::{run, TrajectoryRecord};
use crate::error::Result;
use crate::graph::is_strongly_balanced;
use crate::metrics::{classify_run, RunVerdict, VerdictReport};
use crate::scenario::ScenarioConfig;
use crate::schedule::total_graph;

/// Outcome of one run in a batch.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub run: u64,
    pub result: std::result::Result<RunVerdict, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchResult {
    pub seed: u64,
    pub report: VerdictReport,
    pub runs: Vec<RunSummary>,
}

/// Applies `f` to every run of the scenario, in parallel, and returns the
/// results in run order. Each run owns its state; `cfg` is shared read-only.
pub fn map_runs<T, F>(cfg: &ScenarioConfig, runs: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, Result<TrajectoryRecord>) -> T + Sync,
{
    (0..runs)
        .into_par_iter()
        .map(|r| f(r, run(cfg, r)))
        .collect()
}

/// The `(V1, V2)` split of the total graph when it is strongly balanced with
/// at least one negative arc.
pub fn bipartition(cfg: &ScenarioConfig) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let total = total_graph(&cfg.schedule, cfg.horizon)?;
    let b = is_strongly_balanced(&total.graph);
    Ok(if b.balanced && !b.vacuous {
        b.bipartition
    } else {
        None
    })
}

/// Runs `cfg.num_runs` (or `runs`, when given) independent executions and
/// classifies each. Fails only on configuration errors; a run that errors is
/// counted as inconclusive.
pub fn run_montecarlo(cfg: &ScenarioConfig, runs: Option<u64>) -> Result<BatchResult> {
    cfg.validate()?;
    let split = bipartition(cfg)?;
    let split_ref = split.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()));
    let summaries = map_runs(cfg, runs.unwrap_or(cfg.num_runs), |r, traj| RunSummary {
        run: r,
        result: traj
            .map(|t| classify_run(&t, &cfg.detect, cfg.horizon, split_ref))
            .map_err(|e| e.to_string()),
    });
    let mut report = VerdictReport::default();
    for s in &summaries {
        match &s.result {
            Ok(v) => report.record(v.verdict),
            Err(_) => report.record_error(),
        }
    }
    Ok(BatchResult {
        seed: cfg.seed,
        report,
        runs: summaries,
    })
}

/// `t,node,state`, one row per recorded slot and node. Floats are written in
/// shortest round-trip form.
pub fn write_trajectory_csv(traj: &TrajectoryRecord, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "t,node,state")?;
    for s in &traj.states {
        for (i, x) in s.s.iter().enumerate() {
            writeln!(w, "{},{i},{x:?}", s.t)?;
        }
    }
    Ok(())
}

/// `t,M,H,h,gap`, one row per recorded slot.
pub fn write_metrics_csv(traj: &TrajectoryRecord, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "t,M,H,h,gap")?;
    for (s, m) in traj.states.iter().zip(&traj.metrics) {
        writeln!(
            w,
            "{},{:?},{:?},{:?},{:?}",
            s.t, m.max_abs, m.max, m.min, m.gap
        )?;
    }
    Ok(())
}

/// `run,seed,verdict,first_cross,limit_0,...`; empty cells where a value does
/// not apply, `error` as the verdict of a failed run.
pub fn write_verdicts_csv(batch: &BatchResult, n: usize, mut w: impl Write) -> io::Result<()> {
    write!(w, "run,seed,verdict,first_cross")?;
    for i in 0..n {
        write!(w, ",limit_{i}")?;
    }
    writeln!(w)?;
    for s in &batch.runs {
        write!(w, "{},{}", s.run, batch.seed)?;
        match &s.result {
            Ok(v) => {
                write!(w, ",{},", v.verdict)?;
                if let Some(t) = v.first_cross {
                    write!(w, "{t}")?;
                }
                match &v.limits {
                    Some(l) => l.iter().try_for_each(|x| write!(w, ",{x:?}"))?,
                    None => (0..n).try_for_each(|_| write!(w, ","))?,
                }
            }
            Err(_) => {
                write!(w, ",error,")?;
                (0..n).try_for_each(|_| write!(w, ","))?;
            }
        }
        writeln!(w)?;
    }
    Ok(())
}
