//! Stochastic weight environments.
//!
//! An environment is a distribution over weight vectors in `[0, 1]^L` with a
//! known mean vector. Learners only ever see draws: the full initial draw and
//! per-episode semi-bandit feedback. The mean is for the simulator's own
//! bookkeeping (optimal basis, pseudo-regret, gaps).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const DEFAULT_MC_SEED: u64 = 0x006d_6174_726f_6964;

/// Anything that can produce i.i.d. weight vectors.
pub trait WeightDistribution {
    fn num_items(&self) -> usize;
    fn draw_full<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentKind {
    /// Independent coins with the given success probabilities.
    Bernoulli,
    /// Latency `mu(e) - 1 + Exp(1)` mapped to reward
    /// `clamp(1 - latency / normalization, 0, 1)`.
    ClippedExponential {
        latencies: Vec<f64>,
        normalization: f64,
        mc_samples: usize,
        mc_seed: u64,
    },
    /// One of the stored rows, chosen uniformly.
    EmpiricalRows { rows: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    kind: EnvironmentKind,
    mean: Vec<f64>,
}

impl Environment {
    pub fn bernoulli(means: Vec<f64>) -> Result<Self> {
        if let Some((e, p)) = means
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::Domain(format!(
                "bernoulli mean of item {e} is {p}, outside [0, 1]"
            )));
        }
        Ok(Environment {
            kind: EnvironmentKind::Bernoulli,
            mean: means,
        })
    }

    /// Latency environment. `normalization` defaults to the largest expected
    /// latency. The mean reward of each item is estimated by Monte Carlo with
    /// `mc_samples` draws from a stream seeded by `mc_seed`, and frozen.
    pub fn clipped_exponential(
        latencies: Vec<f64>,
        normalization: Option<f64>,
        mc_samples: usize,
        mc_seed: u64,
    ) -> Result<Self> {
        if let Some((e, mu)) = latencies
            .iter()
            .enumerate()
            .find(|(_, mu)| !mu.is_finite() || **mu < 0.0)
        {
            return Err(Error::Domain(format!(
                "expected latency of item {e} is {mu}; must be finite and non-negative"
            )));
        }
        let normalization =
            normalization.unwrap_or_else(|| latencies.iter().copied().fold(0.0, f64::max));
        if !(normalization.is_finite() && normalization > 0.0) {
            return Err(Error::Domain(format!(
                "latency normalization must be positive, got {normalization}"
            )));
        }
        if mc_samples == 0 {
            return Err(Error::Domain("mc_samples must be at least 1".into()));
        }
        let mean = latencies
            .par_iter()
            .enumerate()
            .map(|(e, &mu)| {
                let mut rng = ChaCha8Rng::seed_from_u64(mc_seed);
                rng.set_stream(e as u64);
                let total: f64 = (0..mc_samples)
                    .map(|_| latency_reward(mu, normalization, &mut rng))
                    .sum();
                total / mc_samples as f64
            })
            .collect();
        Ok(Environment {
            kind: EnvironmentKind::ClippedExponential {
                latencies,
                normalization,
                mc_samples,
                mc_seed,
            },
            mean,
        })
    }

    pub fn empirical_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Domain(
                "reward rows must contain at least one row".into(),
            ));
        };
        let l = first.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != l {
                return Err(Error::Domain(format!(
                    "row {i} has {} entries, expected {l}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::Domain(format!(
                    "row {i} has value {x} outside [0, 1]"
                )));
            }
        }
        let n = rows.len() as f64;
        let mean = (0..l)
            .map(|e| rows.iter().map(|r| r[e]).sum::<f64>() / n)
            .collect();
        Ok(Environment {
            kind: EnvironmentKind::EmpiricalRows { rows },
            mean,
        })
    }

    pub fn kind(&self) -> &EnvironmentKind {
        &self.kind
    }

    /// Expected weight vector `E[w]`. Simulator-side only.
    pub fn mean_vector(&self) -> &[f64] {
        &self.mean
    }

    /// Converts a reward back to a latency for latency environments.
    pub fn reward_to_latency(&self, reward: f64) -> Option<f64> {
        match &self.kind {
            EnvironmentKind::ClippedExponential { normalization, .. } => {
                Some((1.0 - reward) * normalization)
            }
            _ => None,
        }
    }
}

fn latency_reward<R: Rng + ?Sized>(mu: f64, normalization: f64, rng: &mut R) -> f64 {
    let noise: f64 = Exp1.sample(rng);
    let latency = mu - 1.0 + noise;
    (1.0 - latency / normalization).clamp(0.0, 1.0)
}

impl WeightDistribution for Environment {
    fn num_items(&self) -> usize {
        self.mean.len()
    }

    fn draw_full<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.kind {
            EnvironmentKind::Bernoulli => self
                .mean
                .iter()
                .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
                .collect(),
            EnvironmentKind::ClippedExponential {
                latencies,
                normalization,
                ..
            } => latencies
                .iter()
                .map(|&mu| latency_reward(mu, *normalization, rng))
                .collect(),
            EnvironmentKind::EmpiricalRows { rows } => {
                rows[rng.random_range(0..rows.len())].clone()
            }
        }
    }
}

/// Semi-bandit observation: the weights of the chosen items, in basis order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Feedback {
    entries: Vec<(usize, f64)>,
}

impl Feedback {
    pub fn new(entries: Vec<(usize, f64)>) -> Self {
        Feedback { entries }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, item: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|(e, _)| *e == item)
            .map(|&(_, w)| w)
    }
}

/// Restricts a realized weight vector to the chosen basis.
pub fn feedback(weights: &[f64], basis: &[usize]) -> Feedback {
    Feedback {
        entries: basis.iter().map(|&e| (e, weights[e])).collect(),
    }
}
