//! Learning policies: optimistic matroid maximization (OMM), an epsilon-greedy
//! baseline, and the clairvoyant optimal policy.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::environment::Feedback;
use crate::error::{Error, Result};
use crate::greedy::greedy_max_basis;
use crate::matroid::Matroid;

/// Radius `sqrt(2 ln t / s)` of the confidence interval after `s`
/// observations at episode index `t`. `ln t` is clamped at zero, so `t <= 1`
/// gives a zero radius.
pub fn confidence_radius(t: u64, s: u64) -> Result<f64> {
    if s == 0 {
        return Err(Error::Contract(
            "confidence radius needs at least one observation".into(),
        ));
    }
    let log_t = if t <= 1 { 0.0 } else { (t as f64).ln() };
    Ok((2.0 * log_t / s as f64).sqrt())
}

/// Per-item empirical means and observation counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BanditState {
    counts: Vec<u64>,
    means: Vec<f64>,
    episode: u64,
}

impl BanditState {
    /// State after the full initial observation `w0`: one sample per item.
    pub fn initialize(w0: &[f64]) -> Self {
        BanditState {
            counts: vec![1; w0.len()],
            means: w0.to_vec(),
            episode: 0,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Number of completed episodes.
    pub fn episode(&self) -> u64 {
        self.episode
    }

    fn check_initialized(&self, matroid: &Matroid) -> Result<()> {
        if self.counts.len() != matroid.len() || self.counts.contains(&0) {
            return Err(Error::Contract(format!(
                "bandit state covers {} items but the matroid has {}; initialize it first",
                self.counts.len(),
                matroid.len()
            )));
        }
        Ok(())
    }

    /// Upper confidence bounds for the next episode.
    pub fn ucb_values(&self) -> Vec<f64> {
        self.means
            .iter()
            .zip(&self.counts)
            .map(|(&m, &c)| m + confidence_radius(self.episode, c).unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Folds the semi-bandit observation of `basis` into the running means and
    /// advances the episode counter.
    pub fn update(&mut self, basis: &[usize], observed: &Feedback) -> Result<()> {
        if observed.len() != basis.len() {
            return Err(Error::FeedbackMismatch(format!(
                "basis has {} items but {} weights were observed",
                basis.len(),
                observed.len()
            )));
        }
        let mut values = Vec::with_capacity(basis.len());
        for &e in basis {
            if e >= self.counts.len() {
                return Err(Error::ItemOutOfRange {
                    item: e,
                    ground_set_size: self.counts.len(),
                });
            }
            let hits: Vec<f64> = observed
                .entries()
                .iter()
                .filter(|(i, _)| *i == e)
                .map(|&(_, w)| w)
                .collect();
            match hits.as_slice() {
                [w] if w.is_finite() => values.push(*w),
                [w] => {
                    return Err(Error::FeedbackMismatch(format!(
                        "weight {w} observed for item {e} is not finite"
                    )))
                }
                [] => {
                    return Err(Error::FeedbackMismatch(format!(
                        "no weight observed for item {e}"
                    )))
                }
                _ => {
                    return Err(Error::FeedbackMismatch(format!(
                        "item {e} observed more than once"
                    )))
                }
            }
        }
        for (&e, w) in basis.iter().zip(values) {
            let old = self.counts[e];
            let new = old + 1;
            self.means[e] = (old as f64 * self.means[e] + w) / new as f64;
            self.counts[e] = new;
        }
        self.episode += 1;
        Ok(())
    }
}

/// A basis chosen for one episode, plus the UCBs that produced it (OMM only).
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDecision {
    pub basis: Vec<usize>,
    pub ucb_values: Option<Vec<f64>>,
}

/// Greedy basis with respect to the upper confidence bounds of `state`.
pub fn omm_select(matroid: &Matroid, state: &BanditState) -> Result<PolicyDecision> {
    state.check_initialized(matroid)?;
    let ucb = state.ucb_values();
    Ok(PolicyDecision {
        basis: greedy_max_basis(matroid, &ucb),
        ucb_values: Some(ucb),
    })
}

/// Builds a basis one item at a time. At each step, with probability
/// `epsilon` a uniformly random addable item is taken; otherwise the addable
/// item with the highest empirical mean (lowest index on ties).
pub fn epsilon_greedy_select<R: Rng + ?Sized>(
    matroid: &Matroid,
    state: &BanditState,
    epsilon: f64,
    rng: &mut R,
) -> Result<PolicyDecision> {
    state.check_initialized(matroid)?;
    check_epsilon(epsilon)?;
    let means = state.means();
    let mut set = matroid.empty_set();
    while !set.is_basis() {
        let addable = set.addable();
        if addable.is_empty() {
            break;
        }
        let explore = rng.random::<f64>() < epsilon;
        let pick = if explore {
            addable[rng.random_range(0..addable.len())]
        } else {
            // first maximum wins, and `addable` is ascending
            let mut best = addable[0];
            for &e in &addable[1..] {
                if means[e] > means[best] {
                    best = e;
                }
            }
            best
        };
        set.insert(pick);
    }
    Ok(PolicyDecision {
        basis: set.into_items(),
        ucb_values: None,
    })
}

/// The maximum-weight basis under the true means.
pub fn optimal_policy_select(matroid: &Matroid, mean_weights: &[f64]) -> PolicyDecision {
    PolicyDecision {
        basis: greedy_max_basis(matroid, mean_weights),
        ucb_values: None,
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )))
    }
}

/// Which policy to run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    Omm,
    EpsilonGreedy { epsilon: f64 },
    Optimal,
}

impl PolicySpec {
    /// Label used in traces, e.g. `omm` or `epsilon_greedy(0.1)`.
    pub fn label(&self) -> String {
        match self {
            PolicySpec::Omm => "omm".into(),
            PolicySpec::EpsilonGreedy { epsilon } => format!("epsilon_greedy({epsilon})"),
            PolicySpec::Optimal => "optimal".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PolicySpec::EpsilonGreedy { epsilon } => check_epsilon(*epsilon),
            _ => Ok(()),
        }
    }
}

/// A running policy. Learners see the initial full draw and per-episode
/// feedback only; the optimal policy is handed its basis by the simulator.
#[derive(Debug, Clone)]
pub enum Learner {
    Omm(BanditState),
    EpsilonGreedy { state: BanditState, epsilon: f64 },
    Optimal { basis: Vec<usize> },
}

impl Learner {
    /// Starts `spec` from the initial observation `w0`. `optimal_basis` is
    /// only used by [`PolicySpec::Optimal`].
    pub fn new(spec: PolicySpec, w0: &[f64], optimal_basis: &[usize]) -> Result<Self> {
        spec.validate()?;
        Ok(match spec {
            PolicySpec::Omm => Learner::Omm(BanditState::initialize(w0)),
            PolicySpec::EpsilonGreedy { epsilon } => Learner::EpsilonGreedy {
                state: BanditState::initialize(w0),
                epsilon,
            },
            PolicySpec::Optimal => Learner::Optimal {
                basis: optimal_basis.to_vec(),
            },
        })
    }

    pub fn select(&self, matroid: &Matroid, rng: &mut dyn RngCore) -> Result<PolicyDecision> {
        match self {
            Learner::Omm(state) => omm_select(matroid, state),
            Learner::EpsilonGreedy { state, epsilon } => {
                epsilon_greedy_select(matroid, state, *epsilon, rng)
            }
            Learner::Optimal { basis } => Ok(PolicyDecision {
                basis: basis.clone(),
                ucb_values: None,
            }),
        }
    }

    pub fn observe(&mut self, basis: &[usize], observed: &Feedback) -> Result<()> {
        match self {
            Learner::Omm(state) | Learner::EpsilonGreedy { state, .. } => {
                state.update(basis, observed)
            }
            Learner::Optimal { .. } => Ok(()),
        }
    }

    pub fn state(&self) -> Option<&BanditState> {
        match self {
            Learner::Omm(state) | Learner::EpsilonGreedy { state, .. } => Some(state),
            Learner::Optimal { .. } => None,
        }
    }
}
