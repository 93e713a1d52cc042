//! Output files of a run: per-episode traces, a summary table and a manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::greedy::evaluate_modular;
use crate::harness::gaps::gap_free_bound;
use crate::harness::{Instance, ReplicationTrace};

pub const TRACE_HEADER: &str = "episode,policy,replication,realized_return,expected_return,pseudo_regret_cum,realized_regret_cum,per_step_return";

pub const SUMMARY_HEADER: &str = "policy,episode,replications,mean_per_step_return,mean_pseudo_regret_cum,mean_realized_regret_cum,optimal_return,gap_dependent_bound,gap_free_bound";

pub const TRACES_FILE: &str = "traces.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Formats `x` like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g12(x: f64) -> String {
    format_sig(x, 12)
}

/// CSV rows (without header) for one replication.
pub fn trace_rows(trace: &ReplicationTrace) -> String {
    let label = trace.policy.label();
    let mut out = String::new();
    for e in &trace.episodes {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.episode,
            label,
            trace.replication,
            g12(e.realized_return),
            g12(e.expected_return),
            g12(e.cumulative_pseudo_regret),
            g12(e.cumulative_realized_regret),
            g12(e.per_step_return()),
        )
        .expect("writing to a String");
    }
    out
}

/// Full trace CSV. Each replication is formatted on its own, then the parts
/// are joined in the order given.
pub fn traces_csv(traces: &[ReplicationTrace]) -> String {
    let parts: Vec<String> = traces.par_iter().map(trace_rows).collect();
    let mut out = String::with_capacity(parts.iter().map(String::len).sum::<usize>() + 128);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for p in parts {
        out.push_str(&p);
    }
    out
}

/// Episodes reported in the summary: powers of ten up to `n`, plus `n`.
pub fn summary_episodes(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    while t < n {
        out.push(t);
        match t.checked_mul(10) {
            Some(next) => t = next,
            None => break,
        }
    }
    out.push(n);
    out
}

/// One row per policy and summary episode, averaged over replications.
pub fn summary_csv(instance: &Instance, traces: &[ReplicationTrace], horizon: u64) -> String {
    let profile = instance.gap_profile();
    let mean = instance.environment.mean_vector();
    let optimal_return = evaluate_modular(profile.optimal(), mean);
    let mut policies = Vec::new();
    for tr in traces {
        if !policies.contains(&tr.policy) {
            policies.push(tr.policy);
        }
    }
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for policy in policies {
        let group: Vec<&ReplicationTrace> = traces.iter().filter(|t| t.policy == policy).collect();
        let reps = group.len() as f64;
        for t in summary_episodes(horizon) {
            let avg = |f: &dyn Fn(&crate::harness::EpisodeTrace) -> f64| {
                group
                    .iter()
                    .map(|tr| f(tr.at(t).expect("summary episode kept")))
                    .sum::<f64>()
                    / reps
            };
            let gap_free = gap_free_bound(profile.ground_set_size(), profile.rank(), t as f64)
                .map(g12)
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                policy.label(),
                t,
                group.len(),
                g12(avg(&|e| e.per_step_return())),
                g12(avg(&|e| e.cumulative_pseudo_regret)),
                g12(avg(&|e| e.cumulative_realized_regret)),
                g12(optimal_return),
                g12(profile.gap_dependent_bound(t as f64)),
                gap_free,
            )
            .expect("writing to a String");
        }
    }
    out
}

/// Everything needed to rerun and check a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub version: String,
    pub duration_seconds: f64,
    pub replication_seeds: Vec<u64>,
    pub optimal_basis: Vec<usize>,
    /// Mean weights the run used, including Monte Carlo estimates.
    pub mean_weights: Vec<f64>,
    pub config: RunConfig,
}

impl RunManifest {
    pub fn new(cfg: &RunConfig, instance: &Instance, duration: Duration) -> Self {
        let mut optimal_basis = instance.gap_profile().optimal().to_vec();
        optimal_basis.sort_unstable();
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: duration.as_secs_f64(),
            replication_seeds: (0..cfg.replications)
                .map(|r| cfg.replication_seed(r))
                .collect(),
            optimal_basis,
            mean_weights: instance.environment.mean_vector().to_vec(),
            config: cfg.clone(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifests always serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Paths of the files written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub traces: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

pub fn write_outputs(
    dir: &Path,
    cfg: &RunConfig,
    instance: &Instance,
    traces: &[ReplicationTrace],
    duration: Duration,
) -> Result<OutputFiles> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = OutputFiles {
        traces: dir.join(TRACES_FILE),
        summary: dir.join(SUMMARY_FILE),
        manifest: dir.join(MANIFEST_FILE),
    };
    let write =
        |path: &Path, text: String| std::fs::write(path, text).map_err(|e| Error::io(path, e));
    write(&files.traces, traces_csv(traces))?;
    write(&files.summary, summary_csv(instance, traces, cfg.horizon))?;
    write(
        &files.manifest,
        RunManifest::new(cfg, instance, duration).to_toml(),
    )?;
    Ok(files)
}
