//! Synthetic instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::matroid::Matroid;

/// Contiguous block assignment of `items` items into `blocks` blocks whose
/// sizes differ by at most one; larger blocks come first.
pub fn balanced_blocks(items: usize, blocks: usize) -> Vec<usize> {
    let base = items / blocks;
    let extra = items % blocks;
    let mut out = Vec::with_capacity(items);
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        out.extend(std::iter::repeat_n(b, size));
    }
    out
}

/// Partition-matroid bandit with `rank` capacity-one blocks. The first item
/// of each block is a Bernoulli(0.5) coin, every other item a
/// Bernoulli(0.5 - delta) coin, so every gap equals `delta`.
///
/// Also returns `(L - K) / (4 delta)`, the asymptotic lower bound on
/// `R(n) / ln n` for consistent algorithms on this instance.
pub fn generate_lower_bound_instance(
    items: usize,
    rank: usize,
    delta: f64,
) -> Result<(Matroid, Environment, f64)> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 0.5), got {delta}"
        )));
    }
    if rank == 0 || rank > items {
        return Err(Error::Domain(format!(
            "need 1 <= rank <= items, got rank {rank} with {items} items"
        )));
    }
    let block_of = balanced_blocks(items, rank);
    let means = block_of
        .iter()
        .enumerate()
        .map(|(e, &b)| {
            if e == 0 || block_of[e - 1] != b {
                0.5
            } else {
                0.5 - delta
            }
        })
        .collect();
    let matroid = Matroid::unit_partition(block_of)?;
    let environment = Environment::bernoulli(means)?;
    let slope = (items - rank) as f64 / (4.0 * delta);
    Ok((matroid, environment, slope))
}

/// Random connected simple graph: a random spanning tree plus distinct extra
/// edges. Expected latencies are uniform in `[1, max_latency]`.
pub fn random_graphic(
    vertices: usize,
    edges: usize,
    max_latency: f64,
    seed: u64,
) -> Result<(Matroid, Vec<f64>)> {
    if vertices == 0 {
        return Err(Error::Domain("a graph needs at least one vertex".into()));
    }
    let max_edges = vertices * (vertices - 1) / 2;
    if edges + 1 < vertices || edges > max_edges {
        return Err(Error::Domain(format!(
            "a connected simple graph on {vertices} vertices has between {} and {max_edges} edges, got {edges}",
            vertices - 1
        )));
    }
    if max_latency.is_nan() || max_latency < 1.0 {
        return Err(Error::Domain(format!(
            "max_latency must be at least 1, got {max_latency}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(&mut rng);
    let mut present = std::collections::HashSet::new();
    let mut list = Vec::with_capacity(edges);
    for i in 1..vertices {
        let u = order[i];
        let v = order[rng.random_range(0..i)];
        present.insert((u.min(v), u.max(v)));
        list.push((u, v));
    }
    while list.len() < edges {
        let u = rng.random_range(0..vertices);
        let v = rng.random_range(0..vertices);
        if u != v && present.insert((u.min(v), u.max(v))) {
            list.push((u, v));
        }
    }
    let latencies = (0..edges)
        .map(|_| rng.random_range(1.0..=max_latency))
        .collect();
    Ok((Matroid::graphic(vertices, list)?, latencies))
}

/// Random bipartite graph where each (left, right) pair is an edge with
/// probability `density`, plus uniform success probabilities per left vertex.
pub fn random_transversal(
    left: usize,
    right: usize,
    density: f64,
    seed: u64,
) -> Result<(Matroid, Vec<f64>)> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Domain(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adjacency = (0..left)
        .map(|_| {
            (0..right)
                .filter(|_| rng.random::<f64>() < density)
                .collect()
        })
        .collect();
    let means = (0..left).map(|_| rng.random::<f64>()).collect();
    Ok((Matroid::transversal(right, adjacency)?, means))
}

/// Random 0/1 feature vectors, each coordinate set with probability
/// `density`.
pub fn random_linear(items: usize, dimension: usize, density: f64, seed: u64) -> Result<Matroid> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Domain(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..items)
        .map(|_| {
            (0..dimension)
                .map(|_| i64::from(rng.random::<f64>() < density))
                .collect()
        })
        .collect();
    Matroid::linear(dimension, columns)
}

/// `rows` reward rows where item `e` is a Bernoulli coin with mean `means[e]`.
pub fn random_reward_rows(means: &[f64], rows: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            means
                .iter()
                .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}
