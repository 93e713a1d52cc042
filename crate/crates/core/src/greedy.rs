//! Maximum-weight bases: the greedy algorithm, an exhaustive oracle, and the
//! exchange bijection between two bases.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matroid::Matroid;

/// Largest ground set [`brute_force_max_basis`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Modular return `sum_{e in items} weights[e]`.
pub fn evaluate_modular(items: &[usize], weights: &[f64]) -> f64 {
    items.iter().map(|&e| weights[e]).sum()
}

/// Item order used by every greedy pass: weight descending, then index
/// ascending.
pub fn greedy_order(weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| by_weight_desc(weights, a, b));
    order
}

fn by_weight_desc(weights: &[f64], a: usize, b: usize) -> Ordering {
    weights[b].total_cmp(&weights[a]).then(a.cmp(&b))
}

/// Greedy maximum-weight basis. Items come back in the order they were
/// added, so position `k` is the `k`-th greedy choice.
///
/// Panics if `weights.len()` differs from the ground set size.
pub fn greedy_max_basis(matroid: &Matroid, weights: &[f64]) -> Vec<usize> {
    assert_eq!(
        weights.len(),
        matroid.len(),
        "weight vector length must match the ground set"
    );
    let mut set = matroid.empty_set();
    for e in greedy_order(weights) {
        if set.is_basis() {
            break;
        }
        set.insert(e);
    }
    set.into_items()
}

/// Exhaustive maximum over all independent sets. Ties go to the
/// lexicographically smallest ascending item list.
pub fn brute_force_max_basis(matroid: &Matroid, weights: &[f64]) -> Result<(Vec<usize>, f64)> {
    let n = matroid.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            items: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    assert_eq!(
        weights.len(),
        n,
        "weight vector length must match the ground set"
    );
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut items = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        items.clear();
        items.extend((0..n).filter(|&e| mask >> e & 1 == 1));
        if !matroid.independent_unchecked(&items) {
            continue;
        }
        let w = evaluate_modular(&items, weights);
        let better = match &best {
            None => true,
            Some((b, bw)) => w > *bw || (w == *bw && items < *b),
        };
        if better {
            best = Some((items.clone(), w));
        }
    }
    // The empty set is always independent, so `best` is set.
    Ok(best.expect("empty set is independent"))
}

/// Pairing `pi` between a chosen basis `A^t` and a reference basis `A*`:
/// position `k` of `A^t` is paired with position `pi[k]` of `A*`.
///
/// Construction guarantees that `{a^t_1, .., a^t_{k-1}, a*_{pi(k)}}` is
/// independent for every `k` and that shared items are paired with
/// themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeBijection {
    pi: Vec<usize>,
}

/// A failed invariant of an [`ExchangeBijection`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BijectionViolation {
    NotPermutation,
    PrefixDependent { position: usize },
    SharedItemMoved { position: usize },
}

impl ExchangeBijection {
    /// Builds the pairing by exchanging the items of `chosen` for items of
    /// `optimal` from the last position down to the first. At each step the
    /// unpaired optimal item with the smallest index that keeps the working
    /// basis independent is used.
    pub fn construct(matroid: &Matroid, optimal: &[usize], chosen: &[usize]) -> Result<Self> {
        for (name, basis) in [("optimal", optimal), ("chosen", chosen)] {
            if !matroid.is_basis(basis)? {
                return Err(Error::Contract(format!(
                    "{name} set {basis:?} is not a basis (rank {})",
                    matroid.rank()
                )));
            }
        }
        let k = chosen.len();
        let mut position_in_optimal = vec![None; matroid.len()];
        for (i, &e) in optimal.iter().enumerate() {
            position_in_optimal[e] = Some(i);
        }

        let mut pi = vec![usize::MAX; k];
        let mut paired = vec![false; k];
        // working[j] is the item currently at position j of B_k
        let mut working = chosen.to_vec();
        let mut probe = Vec::with_capacity(k);

        for pos in (0..k).rev() {
            if let Some(i) = position_in_optimal[chosen[pos]] {
                pi[pos] = i;
                paired[i] = true;
                continue;
            }
            let mut exchanged = false;
            for i in 0..k {
                if paired[i] {
                    continue;
                }
                let candidate = optimal[i];
                // Must come from A* - (B_k - a^t_k).
                if working
                    .iter()
                    .enumerate()
                    .any(|(j, &x)| j != pos && x == candidate)
                {
                    continue;
                }
                probe.clear();
                probe.extend(
                    working
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != pos)
                        .map(|(_, &x)| x),
                );
                probe.push(candidate);
                if matroid.independent_unchecked(&probe) {
                    pi[pos] = i;
                    paired[i] = true;
                    working[pos] = candidate;
                    exchanged = true;
                    break;
                }
            }
            if !exchanged {
                return Err(Error::ExchangeFailed { position: pos });
            }
        }
        Ok(ExchangeBijection { pi })
    }

    /// Identity pairing on `k` positions.
    pub fn identity(k: usize) -> Self {
        ExchangeBijection {
            pi: (0..k).collect(),
        }
    }

    /// `pi[k]` is the position in the optimal basis paired with position `k`.
    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// Position in the optimal basis paired with chosen position `k`.
    pub fn partner(&self, k: usize) -> usize {
        self.pi[k]
    }

    /// Checks all invariants with the from-scratch independence oracle.
    pub fn violations(
        &self,
        matroid: &Matroid,
        optimal: &[usize],
        chosen: &[usize],
    ) -> Vec<BijectionViolation> {
        let k = self.pi.len();
        let mut out = Vec::new();
        let mut hit = vec![false; k];
        let permutation = optimal.len() == k
            && chosen.len() == k
            && self
                .pi
                .iter()
                .all(|&i| i < k && !std::mem::replace(&mut hit[i], true));
        if !permutation {
            out.push(BijectionViolation::NotPermutation);
            return out;
        }
        for pos in 0..k {
            let mut prefix = chosen[..pos].to_vec();
            let partner = optimal[self.pi[pos]];
            if !prefix.contains(&partner) {
                prefix.push(partner);
                if !matroid.independent_unchecked(&prefix) {
                    out.push(BijectionViolation::PrefixDependent { position: pos });
                }
            } else {
                out.push(BijectionViolation::PrefixDependent { position: pos });
            }
            if let Some(i) = optimal.iter().position(|&x| x == chosen[pos]) {
                if self.pi[pos] != i {
                    out.push(BijectionViolation::SharedItemMoved { position: pos });
                }
            }
        }
        out
    }
}
