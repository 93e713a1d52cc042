//! Run configuration files.
//!
//! Configs are TOML. Top-level keys describe the run; the `[instance]` table
//! selects how the matroid and its weight distribution are built:
//!
//! ```toml
//! seed = 7
//! horizon = 10000
//! replications = 20
//! output = "runs/lower-bound"
//! policies = [{ name = "omm" }, { name = "epsilon_greedy", epsilon = 0.1 }, { name = "optimal" }]
//!
//! [instance]
//! type = "lower_bound"
//! items = 20
//! rank = 4
//! delta = 0.1
//! ```
//!
//! Other instance types are `explicit` (with `[instance.matroid]` and
//! `[instance.environment]` tables), `random_graphic`, `edge_list`,
//! `bipartite` and `feature_matrix`. Relative paths are resolved against the
//! directory of the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::environment::{Environment, DEFAULT_MC_SAMPLES, DEFAULT_MC_SEED};
use crate::error::{Error, Result};
use crate::harness::instances::{generate_lower_bound_instance, random_graphic};
use crate::harness::loaders::{
    load_bipartite, load_edge_list, load_feature_matrix, load_reward_rows,
};
use crate::harness::Instance;
use crate::matroid::Matroid;
use crate::policy::PolicySpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub horizon: u64,
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub policies: Vec<PolicySpec>,
    /// Run the per-episode decomposition and UCB checks.
    #[serde(default)]
    pub instrument: bool,
    pub instance: InstanceSpec,
}

fn one() -> usize {
    1
}

fn default_output() -> PathBuf {
    PathBuf::from("output")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    Explicit {
        matroid: MatroidSpec,
        environment: EnvironmentSpec,
    },
    /// Partition bandit with capacity-one blocks and gaps `delta`.
    LowerBound {
        items: usize,
        rank: usize,
        delta: f64,
    },
    /// Random connected graph with latency weights.
    RandomGraphic {
        vertices: usize,
        edges: usize,
        seed: u64,
        #[serde(default = "default_max_latency")]
        max_latency: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_samples: Option<usize>,
    },
    /// Graphic matroid from an edge list with latency weights.
    EdgeList {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normalization: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_samples: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_seed: Option<u64>,
    },
    /// Transversal matroid with Bernoulli weights from a bipartite file.
    Bipartite { path: PathBuf },
    /// Linear matroid from a feature matrix, weights from reward rows.
    FeatureMatrix { path: PathBuf, rewards: PathBuf },
}

fn default_max_latency() -> f64 {
    20.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        items: usize,
        rank: usize,
    },
    Partition {
        block_of: Vec<usize>,
        /// Defaults to capacity one for every block.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        capacities: Option<Vec<usize>>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Transversal {
        right_vertices: usize,
        adjacency: Vec<Vec<usize>>,
    },
    Linear {
        dimension: usize,
        columns: Vec<Vec<i64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    Bernoulli {
        means: Vec<f64>,
    },
    ClippedExponential {
        latencies: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normalization: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_samples: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mc_seed: Option<u64>,
    },
    RewardRows {
        rows: Vec<Vec<f64>>,
    },
    RewardRowsFile {
        path: PathBuf,
    },
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads, parses and validates a config file, resolving relative paths
    /// against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let base = std::path::absolute(base).map_err(|e| Error::io(base, e))?;
        cfg.resolve_paths(&base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs always serialize")
    }

    /// Makes every relative path in the config relative to `base` instead.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output);
        match &mut self.instance {
            InstanceSpec::EdgeList { path, .. } | InstanceSpec::Bipartite { path } => fix(path),
            InstanceSpec::FeatureMatrix { path, rewards } => {
                fix(path);
                fix(rewards);
            }
            InstanceSpec::Explicit {
                environment: EnvironmentSpec::RewardRowsFile { path },
                ..
            } => fix(path),
            _ => {}
        }
    }

    /// Field-level checks that do not need to build the instance.
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "list at least one policy"));
        }
        for (i, p) in self.policies.iter().enumerate() {
            p.validate()
                .map_err(|e| Error::config(format!("policies[{i}]"), e.to_string()))?;
        }
        self.seed
            .checked_add(self.replications as u64 - 1)
            .ok_or_else(|| Error::config("seed", "seed + replication index overflows u64"))?;
        match &self.instance {
            InstanceSpec::LowerBound { delta, .. } if !(*delta > 0.0 && *delta < 0.5) => {
                Err(Error::config("instance.delta", "must lie in (0, 0.5)"))
            }
            InstanceSpec::Explicit {
                environment:
                    EnvironmentSpec::ClippedExponential {
                        mc_samples: Some(0),
                        ..
                    },
                ..
            }
            | InstanceSpec::EdgeList {
                mc_samples: Some(0),
                ..
            }
            | InstanceSpec::RandomGraphic {
                mc_samples: Some(0),
                ..
            } => Err(Error::config("instance.mc_samples", "must be at least 1")),
            _ => Ok(()),
        }
    }

    /// Seed of replication `r`.
    pub fn replication_seed(&self, r: usize) -> u64 {
        self.seed + r as u64
    }

    pub fn build_instance(&self) -> Result<Instance> {
        self.instance.build()
    }
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance> {
        let wrap = |field: &str| {
            let field = field.to_string();
            move |e: Error| match e {
                e @ (Error::Io { .. } | Error::Parse { .. } | Error::Config { .. }) => e,
                other => Error::config(field.clone(), other.to_string()),
            }
        };
        let instance = match self {
            InstanceSpec::Explicit {
                matroid,
                environment,
            } => Instance {
                matroid: matroid.build().map_err(wrap("instance.matroid"))?,
                environment: environment.build().map_err(wrap("instance.environment"))?,
            },
            InstanceSpec::LowerBound { items, rank, delta } => {
                let (matroid, environment, _) =
                    generate_lower_bound_instance(*items, *rank, *delta)
                        .map_err(wrap("instance"))?;
                Instance {
                    matroid,
                    environment,
                }
            }
            InstanceSpec::RandomGraphic {
                vertices,
                edges,
                seed,
                max_latency,
                mc_samples,
            } => {
                let (matroid, latencies) = random_graphic(*vertices, *edges, *max_latency, *seed)
                    .map_err(wrap("instance"))?;
                let environment = Environment::clipped_exponential(
                    latencies,
                    None,
                    mc_samples.unwrap_or(DEFAULT_MC_SAMPLES),
                    DEFAULT_MC_SEED,
                )
                .map_err(wrap("instance"))?;
                Instance {
                    matroid,
                    environment,
                }
            }
            InstanceSpec::EdgeList {
                path,
                normalization,
                mc_samples,
                mc_seed,
            } => {
                let (matroid, latencies) = load_edge_list(path)?;
                let environment = Environment::clipped_exponential(
                    latencies,
                    *normalization,
                    mc_samples.unwrap_or(DEFAULT_MC_SAMPLES),
                    mc_seed.unwrap_or(DEFAULT_MC_SEED),
                )
                .map_err(wrap("instance"))?;
                Instance {
                    matroid,
                    environment,
                }
            }
            InstanceSpec::Bipartite { path } => {
                let (matroid, means) = load_bipartite(path)?;
                Instance {
                    matroid,
                    environment: Environment::bernoulli(means).map_err(wrap("instance"))?,
                }
            }
            InstanceSpec::FeatureMatrix { path, rewards } => Instance {
                matroid: load_feature_matrix(path)?,
                environment: Environment::empirical_rows(load_reward_rows(rewards)?)
                    .map_err(wrap("instance.rewards"))?,
            },
        };
        if instance.environment.mean_vector().len() != instance.matroid.len() {
            return Err(Error::config(
                "instance",
                format!(
                    "the matroid has {} items but the environment has {}",
                    instance.matroid.len(),
                    instance.environment.mean_vector().len()
                ),
            ));
        }
        Ok(instance)
    }
}

impl MatroidSpec {
    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidSpec::Uniform { items, rank } => Matroid::uniform(*items, *rank),
            MatroidSpec::Partition {
                block_of,
                capacities: Some(c),
            } => Matroid::partition(block_of.clone(), c.clone()),
            MatroidSpec::Partition {
                block_of,
                capacities: None,
            } => Matroid::unit_partition(block_of.clone()),
            MatroidSpec::Graphic { vertices, edges } => Matroid::graphic(*vertices, edges.clone()),
            MatroidSpec::Transversal {
                right_vertices,
                adjacency,
            } => Matroid::transversal(*right_vertices, adjacency.clone()),
            MatroidSpec::Linear { dimension, columns } => {
                Matroid::linear(*dimension, columns.clone())
            }
        }
    }
}

impl EnvironmentSpec {
    pub fn build(&self) -> Result<Environment> {
        match self {
            EnvironmentSpec::Bernoulli { means } => Environment::bernoulli(means.clone()),
            EnvironmentSpec::ClippedExponential {
                latencies,
                normalization,
                mc_samples,
                mc_seed,
            } => Environment::clipped_exponential(
                latencies.clone(),
                *normalization,
                mc_samples.unwrap_or(DEFAULT_MC_SAMPLES),
                mc_seed.unwrap_or(DEFAULT_MC_SEED),
            ),
            EnvironmentSpec::RewardRows { rows } => Environment::empirical_rows(rows.clone()),
            EnvironmentSpec::RewardRowsFile { path } => {
                Environment::empirical_rows(load_reward_rows(path)?)
            }
        }
    }
}
