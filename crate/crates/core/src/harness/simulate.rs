//! Episodic simulation of a policy on a matroid bandit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::environment::{feedback, WeightDistribution};
use crate::error::{Error, Result};
use crate::greedy::evaluate_modular;
use crate::matroid::Matroid;
use crate::policy::{Learner, PolicySpec};

use super::gaps::{compute_gap_profile, decomposition_check_with, ucb_dominance_violations};

/// Horizons up to this length keep every episode in the trace.
pub const FULL_TRACE_LIMIT: u64 = 10_000;

const ENVIRONMENT_STREAM: u64 = 0;
const POLICY_STREAM: u64 = 1;

/// One recorded episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub episode: u64,
    pub items: Vec<usize>,
    /// `f(A^t, w_t)`
    pub realized_return: f64,
    /// `f(A^t, mean)`
    pub expected_return: f64,
    /// `f(A*, mean) - f(A^t, mean)`
    pub pseudo_regret: f64,
    /// `f(A*, w_t) - f(A^t, w_t)`
    pub realized_regret: f64,
    pub cumulative_realized_return: f64,
    pub cumulative_expected_return: f64,
    pub cumulative_pseudo_regret: f64,
    pub cumulative_realized_regret: f64,
}

impl EpisodeTrace {
    /// Running average of the expected return over the first `episode`
    /// episodes.
    pub fn per_step_return(&self) -> f64 {
        self.cumulative_expected_return / self.episode as f64
    }
}

/// Failures found by the per-episode instrumentation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstrumentationReport {
    pub episodes_checked: u64,
    /// Suboptimal choices that the exchange bijection paired with an optimal
    /// item, over all episodes.
    pub paired_suboptimal_choices: u64,
    /// `(episode, message)` for each failed decomposition relation.
    pub decomposition_failures: Vec<(u64, String)>,
    /// `(episode, position)` where the chosen item's UCB was below its
    /// partner's.
    pub ucb_violations: Vec<(u64, usize)>,
}

impl InstrumentationReport {
    pub fn clean(&self) -> bool {
        self.decomposition_failures.is_empty() && self.ucb_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationTrace {
    pub policy: PolicySpec,
    pub replication: usize,
    pub seed: u64,
    pub episodes: Vec<EpisodeTrace>,
    pub instrumentation: Option<InstrumentationReport>,
}

impl ReplicationTrace {
    /// The recorded episode `t`, if it was kept.
    pub fn at(&self, t: u64) -> Option<&EpisodeTrace> {
        self.episodes
            .binary_search_by_key(&t, |e| e.episode)
            .ok()
            .map(|i| &self.episodes[i])
    }

    pub fn last(&self) -> Option<&EpisodeTrace> {
        self.episodes.last()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimulationOptions {
    /// Run the decomposition and UCB-dominance checks every episode.
    pub instrument: bool,
}

/// Episodes kept in the trace for horizon `n`: all of them up to
/// [`FULL_TRACE_LIMIT`], otherwise a geometric grid plus the round numbers
/// `{1, 2, 5} x 10^k` and `n` itself.
pub fn checkpoints(n: u64) -> Vec<u64> {
    if n <= FULL_TRACE_LIMIT {
        return (1..=n).collect();
    }
    let mut out = Vec::new();
    let mut t = 1u64;
    while t <= n {
        out.push(t);
        t = (t + 1).max((t as f64 * 1.02).ceil() as u64);
    }
    let mut p = 1u64;
    while p <= n {
        for m in [1, 2, 5] {
            if let Some(v) = p.checked_mul(m) {
                if v <= n {
                    out.push(v);
                }
            }
        }
        match p.checked_mul(10) {
            Some(next) => p = next,
            None => break,
        }
    }
    out.push(n);
    out.sort_unstable();
    out.dedup();
    out
}

/// Runs one replication of `policy` for `horizon` episodes.
///
/// The learner is started from one full draw `w_0`, then each episode it
/// picks a basis, a fresh `w_t` is drawn, and only the chosen items' weights
/// are revealed to it. `mean` is used for the optimal basis and regret
/// bookkeeping and is never shown to a learning policy.
#[allow(clippy::too_many_arguments)]
pub fn run_replication<D: WeightDistribution>(
    matroid: &Matroid,
    source: &D,
    mean: &[f64],
    policy: PolicySpec,
    horizon: u64,
    replication: usize,
    seed: u64,
    options: SimulationOptions,
) -> Result<ReplicationTrace> {
    if source.num_items() != matroid.len() || mean.len() != matroid.len() {
        return Err(Error::Contract(format!(
            "environment has {} items and {} means but the matroid has {}",
            source.num_items(),
            mean.len(),
            matroid.len()
        )));
    }
    let profile = compute_gap_profile(matroid, mean);
    let optimal = profile.optimal().to_vec();
    let optimal_value = evaluate_modular(&optimal, mean);

    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(ENVIRONMENT_STREAM);
    let mut policy_rng = ChaCha8Rng::seed_from_u64(seed);
    policy_rng.set_stream(POLICY_STREAM);

    let w0 = source.draw_full(&mut env_rng);
    let mut learner = Learner::new(policy, &w0, &optimal)?;

    let keep = checkpoints(horizon);
    let mut next_keep = keep.iter().peekable();
    let mut episodes = Vec::with_capacity(keep.len());
    let mut report = options.instrument.then(InstrumentationReport::default);

    let (mut cum_realized, mut cum_expected, mut cum_pseudo, mut cum_regret) = (0.0, 0.0, 0.0, 0.0);
    for t in 1..=horizon {
        let decision = learner.select(matroid, &mut policy_rng)?;
        let basis = decision.basis;

        if let Some(report) = report.as_mut() {
            report.episodes_checked += 1;
            let d = decomposition_check_with(&profile, matroid, mean, &basis)?;
            for v in d.violations {
                report.decomposition_failures.push((t, v));
            }
            report.paired_suboptimal_choices +=
                basis.iter().filter(|e| !optimal.contains(e)).count() as u64;
            if let Some(ucb) = &decision.ucb_values {
                for pos in ucb_dominance_violations(&d.bijection, &optimal, &basis, ucb) {
                    report.ucb_violations.push((t, pos));
                }
            }
        }

        let w = source.draw_full(&mut env_rng);
        learner.observe(&basis, &feedback(&w, &basis))?;

        let realized = evaluate_modular(&basis, &w);
        let expected = evaluate_modular(&basis, mean);
        let pseudo = optimal_value - expected;
        let regret = evaluate_modular(&optimal, &w) - realized;
        cum_realized += realized;
        cum_expected += expected;
        cum_pseudo += pseudo;
        cum_regret += regret;

        if next_keep.peek() == Some(&&t) {
            next_keep.next();
            episodes.push(EpisodeTrace {
                episode: t,
                items: basis,
                realized_return: realized,
                expected_return: expected,
                pseudo_regret: pseudo,
                realized_regret: regret,
                cumulative_realized_return: cum_realized,
                cumulative_expected_return: cum_expected,
                cumulative_pseudo_regret: cum_pseudo,
                cumulative_realized_regret: cum_regret,
            });
        }
    }
    Ok(ReplicationTrace {
        policy,
        replication,
        seed,
        episodes,
        instrumentation: report,
    })
}
