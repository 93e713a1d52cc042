//! Gap profiles, regret bounds, and per-episode regret decomposition.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greedy::{evaluate_modular, greedy_order, ExchangeBijection};
use crate::matroid::Matroid;
use crate::policy::optimal_policy_select;

/// Tolerance for the exact decomposition identity.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-9;

const FOUR_THIRDS_PI_SQ: f64 = 4.0 / 3.0 * PI * PI;

/// Gaps of one suboptimal item against every optimal item.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemGaps {
    pub item: usize,
    /// `gaps[k] = mean(a*_k) - mean(item)`, non-increasing in `k`.
    pub gaps: Vec<f64>,
    /// Number of strictly positive gaps. They form a prefix of `gaps`.
    pub positive: usize,
}

impl ItemGaps {
    /// Smallest positive gap, if any.
    pub fn smallest_positive(&self) -> Option<f64> {
        self.positive.checked_sub(1).map(|k| self.gaps[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    optimal: Vec<usize>,
    suboptimal: Vec<ItemGaps>,
}

impl GapProfile {
    /// Optimal basis sorted by descending mean weight.
    pub fn optimal(&self) -> &[usize] {
        &self.optimal
    }

    pub fn suboptimal(&self) -> &[ItemGaps] {
        &self.suboptimal
    }

    /// Rank `K`.
    pub fn rank(&self) -> usize {
        self.optimal.len()
    }

    pub fn ground_set_size(&self) -> usize {
        self.optimal.len() + self.suboptimal.len()
    }

    /// Minimum positive gap over all suboptimal items; `None` when no item
    /// has a positive gap.
    pub fn delta_min(&self) -> Option<f64> {
        self.suboptimal
            .iter()
            .filter_map(ItemGaps::smallest_positive)
            .reduce(f64::min)
    }

    /// Gap-dependent upper bound on expected cumulative regret after `n`
    /// episodes. Items without positive gaps contribute nothing.
    pub fn gap_dependent_bound(&self, n: f64) -> f64 {
        let log_n = n.ln().max(0.0);
        self.suboptimal
            .iter()
            .filter(|g| g.positive > 0)
            .map(|g| {
                let smallest = g.gaps[g.positive - 1];
                let sum: f64 = g.gaps[..g.positive].iter().sum();
                16.0 / smallest * log_n + sum * FOUR_THIRDS_PI_SQ
            })
            .sum()
    }
}

/// Gaps of every suboptimal item against the optimal basis under `mean`.
pub fn compute_gap_profile(matroid: &Matroid, mean: &[f64]) -> GapProfile {
    let mut optimal = optimal_policy_select(matroid, mean).basis;
    let order = greedy_order(mean);
    let mut rank_of = vec![0; mean.len()];
    for (r, &e) in order.iter().enumerate() {
        rank_of[e] = r;
    }
    optimal.sort_by_key(|&e| rank_of[e]);

    let mut in_optimal = vec![false; mean.len()];
    for &e in &optimal {
        in_optimal[e] = true;
    }
    let suboptimal = (0..mean.len())
        .filter(|&e| !in_optimal[e])
        .map(|e| {
            let gaps: Vec<f64> = optimal.iter().map(|&a| mean[a] - mean[e]).collect();
            let positive = gaps.iter().take_while(|&&g| g > 0.0).count();
            ItemGaps {
                item: e,
                gaps,
                positive,
            }
        })
        .collect();
    GapProfile {
        optimal,
        suboptimal,
    }
}

/// Gap-free upper bound `8 sqrt(K L n ln n) + (4/3) pi^2 K L`.
pub fn gap_free_bound(items: usize, rank: usize, n: f64) -> Result<f64> {
    if n.is_nan() || n < 2.0 {
        return Err(Error::Domain(format!(
            "gap-free bound needs a horizon of at least 2, got {n}"
        )));
    }
    let (l, k) = (items as f64, rank as f64);
    Ok(8.0 * (k * l * n * n.ln()).sqrt() + FOUR_THIRDS_PI_SQ * k * l)
}

/// Outcome of decomposing the regret of one basis into per-item gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub bijection: ExchangeBijection,
    /// `f(A*, mean) - f(A^t, mean)`.
    pub regret: f64,
    /// `sum_k Delta_{a^t_k, pi(k)}`.
    pub paired_gap_sum: f64,
    /// Same sum restricted to suboptimal items and positive gaps.
    pub truncated_gap_sum: f64,
    /// Number of suboptimal items paired with an optimal item of higher mean.
    pub indicator_total: usize,
    pub max_indicators_per_item: usize,
    pub violations: Vec<String>,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds the exchange bijection of `chosen` against the optimal basis and
/// checks the regret decomposition: the paired gaps sum to the regret, the
/// positive-gap truncation bounds it from above, and the pairing indicators
/// count at most `K` in total and at most one per item.
pub fn decomposition_check(
    matroid: &Matroid,
    mean: &[f64],
    chosen: &[usize],
) -> Result<DecompositionReport> {
    let profile = compute_gap_profile(matroid, mean);
    decomposition_check_with(&profile, matroid, mean, chosen)
}

/// [`decomposition_check`] with a precomputed profile.
pub fn decomposition_check_with(
    profile: &GapProfile,
    matroid: &Matroid,
    mean: &[f64],
    chosen: &[usize],
) -> Result<DecompositionReport> {
    let optimal = profile.optimal();
    let bijection = ExchangeBijection::construct(matroid, optimal, chosen)?;
    let k = optimal.len();

    let mut gaps_of = vec![None; mean.len()];
    for g in profile.suboptimal() {
        gaps_of[g.item] = Some(g);
    }

    let regret = evaluate_modular(optimal, mean) - evaluate_modular(chosen, mean);
    let mut paired_gap_sum = 0.0;
    let mut truncated_gap_sum = 0.0;
    let mut per_item = vec![0usize; mean.len()];
    for (pos, &e) in chosen.iter().enumerate() {
        let partner = bijection.partner(pos);
        paired_gap_sum += mean[optimal[partner]] - mean[e];
        if let Some(g) = gaps_of[e] {
            if partner < g.positive {
                truncated_gap_sum += g.gaps[partner];
                per_item[e] += 1;
            }
        }
    }
    let indicator_total: usize = per_item.iter().sum();
    let max_indicators_per_item = per_item.iter().copied().max().unwrap_or(0);

    let mut violations = Vec::new();
    for v in bijection.violations(matroid, optimal, chosen) {
        violations.push(format!("exchange bijection invariant failed: {v:?}"));
    }
    if (paired_gap_sum - regret).abs() > DECOMPOSITION_TOLERANCE {
        violations.push(format!(
            "paired gaps sum to {paired_gap_sum} but the regret is {regret}"
        ));
    }
    if truncated_gap_sum + DECOMPOSITION_TOLERANCE < paired_gap_sum {
        violations.push(format!(
            "positive-gap sum {truncated_gap_sum} is below the paired sum {paired_gap_sum}"
        ));
    }
    if indicator_total > k {
        violations.push(format!(
            "{indicator_total} pairing indicators exceed the rank {k}"
        ));
    }
    if max_indicators_per_item > 1 {
        violations.push(format!(
            "an item carries {max_indicators_per_item} pairing indicators"
        ));
    }
    Ok(DecompositionReport {
        bijection,
        regret,
        paired_gap_sum,
        truncated_gap_sum,
        indicator_total,
        max_indicators_per_item,
        violations,
    })
}

/// Positions where a suboptimal chosen item has a lower UCB than its paired
/// optimal item. Greedy selection on the UCBs should never produce any.
pub fn ucb_dominance_violations(
    bijection: &ExchangeBijection,
    optimal: &[usize],
    chosen: &[usize],
    ucb: &[f64],
) -> Vec<usize> {
    chosen
        .iter()
        .enumerate()
        .filter(|(_, e)| !optimal.contains(e))
        .filter(|&(pos, &e)| ucb[e] < ucb[optimal[bijection.partner(pos)]])
        .map(|(pos, _)| pos)
        .collect()
}
