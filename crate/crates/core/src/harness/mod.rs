//! Simulation harness: instances, loaders, the episode loop and regret
//! metrics.

pub mod gaps;
pub mod instances;
pub mod loaders;
pub mod simulate;

use rayon::prelude::*;

use crate::config::RunConfig;
use crate::environment::Environment;
use crate::error::Result;
use crate::matroid::Matroid;
use crate::policy::PolicySpec;

pub use gaps::{
    compute_gap_profile, decomposition_check, gap_free_bound, DecompositionReport, GapProfile,
    ItemGaps,
};
pub use instances::generate_lower_bound_instance;
pub use loaders::{load_instance, EnvironmentData, InstanceFormat, LoadedInstance};
pub use simulate::{
    checkpoints, run_replication, EpisodeTrace, InstrumentationReport, ReplicationTrace,
    SimulationOptions,
};

/// A matroid together with the distribution of its item weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub matroid: Matroid,
    pub environment: Environment,
}

impl Instance {
    pub fn gap_profile(&self) -> GapProfile {
        compute_gap_profile(&self.matroid, self.environment.mean_vector())
    }

    /// Runs `replications` replications of `policy`, replication `r` seeded
    /// with `seed + r`. Replications run in parallel; the result is ordered
    /// by replication index.
    pub fn simulate(
        &self,
        policy: PolicySpec,
        horizon: u64,
        replications: usize,
        seed: u64,
        options: SimulationOptions,
    ) -> Result<Vec<ReplicationTrace>> {
        (0..replications)
            .into_par_iter()
            .map(|r| {
                run_replication(
                    &self.matroid,
                    &self.environment,
                    self.environment.mean_vector(),
                    policy,
                    horizon,
                    r,
                    seed + r as u64,
                    options,
                )
            })
            .collect()
    }
}

/// Builds the configured instance and runs every policy. Traces are ordered
/// by policy (config order), then replication.
pub fn run_episodes(cfg: &RunConfig) -> Result<(Instance, Vec<ReplicationTrace>)> {
    cfg.validate()?;
    let instance = cfg.build_instance()?;
    let options = SimulationOptions {
        instrument: cfg.instrument,
    };
    let jobs: Vec<(PolicySpec, usize)> = cfg
        .policies
        .iter()
        .flat_map(|&p| (0..cfg.replications).map(move |r| (p, r)))
        .collect();
    let traces = jobs
        .into_par_iter()
        .map(|(policy, r)| {
            run_replication(
                &instance.matroid,
                &instance.environment,
                instance.environment.mean_vector(),
                policy,
                cfg.horizon,
                r,
                cfg.replication_seed(r),
                options,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((instance, traces))
}

/// Mean of `f` over the replications' traces at episode `t`. Every trace
/// must have kept episode `t`.
pub fn mean_at(traces: &[ReplicationTrace], t: u64, f: impl Fn(&EpisodeTrace) -> f64) -> f64 {
    let total: f64 = traces
        .iter()
        .map(|tr| f(tr.at(t).expect("episode kept in the trace")))
        .sum();
    total / traces.len() as f64
}
