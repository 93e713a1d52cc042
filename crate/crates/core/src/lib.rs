//! Combinatorial semi-bandits on matroids.
//!
//! Each episode a policy picks a basis of a matroid, collects the sum of
//! the chosen items' stochastic weights, and observes each chosen item's
//! weight. The crate provides matroid independence oracles for five
//! families, the greedy maximum-weight basis, the optimistic policy (OMM)
//! with epsilon-greedy and clairvoyant baselines, weight environments, and a
//! seeded simulation harness with regret bounds and instrumentation.

pub mod config;
pub mod environment;
pub mod error;
pub mod greedy;
pub mod harness;
pub mod matroid;
pub mod policy;
pub mod report;
pub mod verify;

pub use config::RunConfig;
pub use environment::{Environment, Feedback, WeightDistribution};
pub use error::{Error, Result};
pub use greedy::{greedy_max_basis, ExchangeBijection};
pub use harness::{run_episodes, Instance};
pub use matroid::{IndependentSet, Matroid};
pub use policy::{Learner, PolicySpec};
