//! TOML form of [`ScenarioConfig`].
//!
//! Graph references are paths relative to the scenario file (`graph`,
//! `graphs`, `default`) or inline graph text (`graph_text`, `graph_texts`,
//! `default_text`). Serialising always inlines graphs, so an echoed config is
//! self-contained.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{InitialState, ScenarioConfig};
use crate::dynamics::{ModelConfig, NegativeModel, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::graph::{parse_graph, read_graph_file, SignedDigraph};
use crate::metrics::{DetectSettings, DivergenceMode};
use crate::sampling::{AttentionSchedule, InteractionKind, InteractionPolicy};
use crate::schedule::GraphSchedule;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schedule: RawSchedule,
    #[serde(default)]
    interaction: RawInteraction,
    model: RawModel,
    #[serde(default)]
    attention: RawAttentionPair,
    #[serde(default)]
    init: RawInit,
    #[serde(default)]
    detect: RawDetect,
    #[serde(default)]
    record: RawRecord,
    run: RawRun,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    #[serde(default = "default_schedule_kind")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph_text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    graphs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    graph_texts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default_text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    script: Vec<RawScriptEntry>,
}

fn default_schedule_kind() -> String {
    "static".into()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScriptEntry {
    t: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph_text: Option<String>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInteraction {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    arc: Vec<RawArcProbability>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArcProbability {
    src: usize,
    dst: usize,
    p: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    negative: Option<String>,
    alpha: f64,
    beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    allow_zero_alpha: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cap: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttentionPair {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positive: Option<RawAttention>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    negative: Option<RawAttention>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttention {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cluster_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diverge_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diverge_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    early_stop: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stop_threshold: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stride: Option<u64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_runs: Option<u64>,
}

/// Reads, resolves and validates a scenario file. Graph paths are resolved
/// against the file's directory.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path.parent())
}

/// Parses scenario text. Relative graph paths need `base_dir`.
pub fn parse_scenario(text: &str, base_dir: Option<&Path>) -> Result<ScenarioConfig> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| {
            text[..s.start.min(text.len())].matches('\n').count() + 1
        });
        Error::Parse {
            line,
            msg: e.message().to_string(),
        }
    })?;
    let cfg = resolve(raw, base_dir)?;
    cfg.validate()?;
    Ok(cfg)
}

fn load_graph(
    path: Option<&String>,
    text: Option<&String>,
    field: &str,
    base: Option<&Path>,
) -> Result<SignedDigraph> {
    match (path, text) {
        (Some(p), None) => {
            let p = PathBuf::from(p);
            let full = match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            };
            read_graph_file(full)
        }
        (None, Some(t)) => parse_graph(t),
        (Some(_), Some(_)) => Err(Error::validation(
            field,
            "give either a path or inline text, not both",
        )),
        (None, None) => Err(Error::validation(field, "missing graph")),
    }
}

fn require<T>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::validation(field, "required for this kind"))
}

fn resolve_attention(raw: Option<RawAttention>, field: &str) -> Result<AttentionSchedule> {
    let Some(a) = raw else {
        return Ok(AttentionSchedule::Constant(1.0));
    };
    match a.kind.as_str() {
        "constant" => Ok(AttentionSchedule::Constant(require(
            a.q,
            &format!("{field}.q"),
        )?)),
        "power_decay" => Ok(AttentionSchedule::PowerDecay {
            c: a.c.unwrap_or(1.0),
            gamma: require(a.gamma, &format!("{field}.gamma"))?,
        }),
        "scripted" => Ok(AttentionSchedule::Scripted(require(
            a.values,
            &format!("{field}.values"),
        )?)),
        other => Err(Error::validation(
            format!("{field}.kind"),
            format!("unknown kind `{other}`; expected constant, power_decay or scripted"),
        )),
    }
}

fn resolve(raw: RawScenario, base: Option<&Path>) -> Result<ScenarioConfig> {
    let s = &raw.schedule;
    let schedule = match s.kind.as_str() {
        "static" => GraphSchedule::Static(load_graph(
            s.graph.as_ref(),
            s.graph_text.as_ref(),
            "schedule.graph",
            base,
        )?),
        "periodic" => {
            let mut graphs = Vec::new();
            for p in &s.graphs {
                graphs.push(load_graph(Some(p), None, "schedule.graphs", base)?);
            }
            for t in &s.graph_texts {
                graphs.push(load_graph(None, Some(t), "schedule.graph_texts", base)?);
            }
            GraphSchedule::periodic(graphs)?
        }
        "scripted" => {
            let default = load_graph(
                s.default.as_ref(),
                s.default_text.as_ref(),
                "schedule.default",
                base,
            )?;
            let mut script = BTreeMap::new();
            for e in &s.script {
                let g = load_graph(
                    e.graph.as_ref(),
                    e.graph_text.as_ref(),
                    "schedule.script",
                    base,
                )?;
                if script.insert(e.t, g).is_some() {
                    return Err(Error::validation(
                        "schedule.script",
                        format!("slot {} listed twice", e.t),
                    ));
                }
            }
            GraphSchedule::scripted(script, default)?
        }
        other => {
            return Err(Error::validation(
                "schedule.kind",
                format!("unknown kind `{other}`; expected static, periodic or scripted"),
            ))
        }
    };

    let i = &raw.interaction;
    let mut interaction = match i.kind.as_deref().unwrap_or("full") {
        "per_arc" => InteractionPolicy::per_arc(require(i.p, "interaction.p")?)?,
        "gossip" => InteractionPolicy::gossip(),
        "full" => InteractionPolicy::full(),
        other => {
            return Err(Error::validation(
                "interaction.kind",
                format!("unknown kind `{other}`; expected per_arc, gossip or full"),
            ))
        }
    };
    for a in &i.arc {
        interaction = interaction.with_override(a.src, a.dst, a.p)?;
    }
    interaction = interaction.with_bounds(i.p_lower, i.p_upper)?;

    let m = &raw.model;
    let negative: NegativeModel = m.negative.as_deref().unwrap_or("state_reversion").parse()?;
    let allow_zero_alpha = m.allow_zero_alpha.unwrap_or(false);
    let model = if allow_zero_alpha {
        ModelConfig::with_zero_alpha(negative, m.alpha, m.beta)?
    } else {
        ModelConfig::new(negative, m.alpha, m.beta)?
    }
    .with_cap(m.cap.unwrap_or(DEFAULT_CAP))?;

    let init = match raw.init.kind.as_deref().unwrap_or("uniform") {
        "explicit" => InitialState::Explicit(require(raw.init.values.clone(), "init.values")?),
        "uniform" => InitialState::Uniform {
            lo: raw.init.lo.unwrap_or(-1.0),
            hi: raw.init.hi.unwrap_or(1.0),
        },
        "cluster_levels" => match (raw.init.levels.clone(), raw.init.epsilon) {
            (Some(levels), None) => InitialState::ClusterLevels(levels),
            (None, Some(eps)) => InitialState::ClusterSpacing(eps),
            _ => {
                return Err(Error::validation(
                    "init.levels",
                    "cluster_levels needs exactly one of `levels` or `epsilon`",
                ))
            }
        },
        other => {
            return Err(Error::validation(
                "init.kind",
                format!("unknown kind `{other}`; expected explicit, uniform or cluster_levels"),
            ))
        }
    };

    let d = &raw.detect;
    let defaults = DetectSettings::default();
    let diverge_mode = match d.diverge_mode.as_deref() {
        None | Some("max_abs") => DivergenceMode::MaxAbs,
        Some("max_gap") => DivergenceMode::MaxGap,
        Some(other) => {
            return Err(Error::validation(
                "detect.diverge_mode",
                format!("unknown mode `{other}`; expected max_abs or max_gap"),
            ))
        }
    };
    let detect = DetectSettings {
        eps: d.eps.unwrap_or(defaults.eps),
        window: d.window,
        cluster_eps: d.cluster_eps.unwrap_or(defaults.cluster_eps),
        diverge_threshold: d.diverge_threshold.unwrap_or(defaults.diverge_threshold),
        diverge_mode,
        early_stop: d.early_stop.unwrap_or(defaults.early_stop),
        stop_threshold: d.stop_threshold,
    };

    Ok(ScenarioConfig {
        schedule,
        k: s.k.unwrap_or(1),
        interaction,
        model,
        allow_zero_alpha,
        positive_attention: resolve_attention(raw.attention.positive, "attention.positive")?,
        negative_attention: resolve_attention(raw.attention.negative, "attention.negative")?,
        init,
        horizon: raw.run.horizon,
        stride: raw.record.stride.unwrap_or(1),
        seed: raw.run.seed.unwrap_or(0),
        num_runs: raw.run.num_runs.unwrap_or(1),
        detect,
    })
}

fn raw_attention(a: &AttentionSchedule) -> RawAttention {
    match a {
        AttentionSchedule::Constant(q) => RawAttention {
            kind: "constant".into(),
            q: Some(*q),
            ..Default::default()
        },
        AttentionSchedule::PowerDecay { c, gamma } => RawAttention {
            kind: "power_decay".into(),
            c: Some(*c),
            gamma: Some(*gamma),
            ..Default::default()
        },
        AttentionSchedule::Scripted(v) => RawAttention {
            kind: "scripted".into(),
            values: Some(v.clone()),
            ..Default::default()
        },
    }
}

impl ScenarioConfig {
    /// The config with every default spelled out and graphs inlined.
    /// Parsing the result yields an equal config.
    pub fn to_toml(&self) -> String {
        let schedule = match &self.schedule {
            GraphSchedule::Static(g) => RawSchedule {
                kind: "static".into(),
                graph_text: Some(g.to_text()),
                ..Default::default()
            },
            GraphSchedule::Periodic(gs) => RawSchedule {
                kind: "periodic".into(),
                graph_texts: gs.iter().map(SignedDigraph::to_text).collect(),
                ..Default::default()
            },
            GraphSchedule::Scripted { script, default } => RawSchedule {
                kind: "scripted".into(),
                default_text: Some(default.to_text()),
                script: script
                    .iter()
                    .map(|(&t, g)| RawScriptEntry {
                        t,
                        graph: None,
                        graph_text: Some(g.to_text()),
                    })
                    .collect(),
                ..Default::default()
            },
        };
        let schedule = RawSchedule {
            k: Some(self.k),
            ..schedule
        };

        let (p, arc) = match &self.interaction.kind {
            InteractionKind::PerArc { p, overrides } => (
                Some(*p),
                overrides
                    .iter()
                    .map(|(&(src, dst), &p)| RawArcProbability { src, dst, p })
                    .collect(),
            ),
            _ => (None, Vec::new()),
        };
        let interaction = RawInteraction {
            kind: Some(self.interaction.name().into()),
            p,
            p_lower: self.interaction.lower,
            p_upper: self.interaction.upper,
            arc,
        };

        let init = match &self.init {
            InitialState::Explicit(v) => RawInit {
                kind: Some("explicit".into()),
                values: Some(v.clone()),
                ..Default::default()
            },
            InitialState::Uniform { lo, hi } => RawInit {
                kind: Some("uniform".into()),
                lo: Some(*lo),
                hi: Some(*hi),
                ..Default::default()
            },
            InitialState::ClusterLevels(v) => RawInit {
                kind: Some("cluster_levels".into()),
                levels: Some(v.clone()),
                ..Default::default()
            },
            InitialState::ClusterSpacing(eps) => RawInit {
                kind: Some("cluster_levels".into()),
                epsilon: Some(*eps),
                ..Default::default()
            },
        };

        let d = &self.detect;
        let raw = RawScenario {
            schedule,
            interaction,
            model: RawModel {
                negative: Some(self.model.negative_model.name().into()),
                alpha: self.model.alpha,
                beta: self.model.beta,
                allow_zero_alpha: Some(self.allow_zero_alpha),
                cap: Some(self.model.cap),
            },
            attention: RawAttentionPair {
                positive: Some(raw_attention(&self.positive_attention)),
                negative: Some(raw_attention(&self.negative_attention)),
            },
            init,
            detect: RawDetect {
                eps: Some(d.eps),
                window: d.window,
                cluster_eps: Some(d.cluster_eps),
                diverge_threshold: Some(d.diverge_threshold),
                diverge_mode: Some(d.diverge_mode.name().into()),
                early_stop: Some(d.early_stop),
                stop_threshold: d.stop_threshold,
            },
            record: RawRecord {
                stride: Some(self.stride),
            },
            run: RawRun {
                horizon: self.horizon,
                seed: Some(self.seed),
                num_runs: Some(self.num_runs),
            },
        };
        toml::to_string(&raw).expect("scenario fields are all representable in TOML")
    }
}
