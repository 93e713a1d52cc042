//! Invariant suites run by `omm verify`.
//!
//! Each suite checks the library against slow but obviously correct
//! procedures: exhaustive subset enumeration for the matroid axioms, brute
//! force for the greedy optimum, and the from-scratch oracle for the exchange
//! bijection and regret decomposition. Suites cover the configured instance
//! where its size allows, plus random small instances of every family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::greedy::{brute_force_max_basis, evaluate_modular, greedy_max_basis, ExchangeBijection};
use crate::harness::gaps::{compute_gap_profile, decomposition_check_with};
use crate::harness::Instance;
use crate::matroid::Matroid;

/// Largest ground set checked exhaustively against the axioms.
pub const AXIOM_LIMIT: usize = 10;

pub const FAMILIES: [&str; 5] = ["uniform", "partition", "graphic", "transversal", "linear"];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Random matroid of the named family on `items` items.
pub fn random_matroid<R: Rng + ?Sized>(family: &str, items: usize, rng: &mut R) -> Result<Matroid> {
    match family {
        "uniform" => Matroid::uniform(items, rng.random_range(0..=items)),
        "partition" => {
            let blocks = rng.random_range(1..=items.max(1));
            let block_of = (0..items).map(|_| rng.random_range(0..blocks)).collect();
            let capacities = (0..blocks).map(|_| rng.random_range(0..=2)).collect();
            Matroid::partition(block_of, capacities)
        }
        "graphic" => {
            let vertices = rng.random_range(1..=6);
            let edges = (0..items)
                .map(|_| (rng.random_range(0..vertices), rng.random_range(0..vertices)))
                .collect();
            Matroid::graphic(vertices, edges)
        }
        "transversal" => {
            let right = rng.random_range(0..=5);
            let adjacency = (0..items)
                .map(|_| (0..right).filter(|_| rng.random_bool(0.35)).collect())
                .collect();
            Matroid::transversal(right, adjacency)
        }
        "linear" => {
            let dimension = rng.random_range(1..=4);
            let columns = (0..items)
                .map(|_| (0..dimension).map(|_| rng.random_range(-2..=2)).collect())
                .collect();
            Matroid::linear(dimension, columns)
        }
        other => Err(crate::error::Error::Domain(format!(
            "unknown matroid family {other:?}"
        ))),
    }
}

fn items_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Exhaustively checks the independence axioms and the rank on a matroid
/// with at most [`AXIOM_LIMIT`] items. Also checks that the incremental
/// tracker agrees with the from-scratch oracle on every independent set.
pub fn axiom_violations(m: &Matroid) -> Vec<String> {
    let l = m.len();
    assert!(
        l <= AXIOM_LIMIT,
        "exhaustive axiom check needs at most {AXIOM_LIMIT} items"
    );
    let subsets = 1u32 << l;
    let indep: Vec<bool> = (0..subsets)
        .map(|mask| m.independent_unchecked(&items_of(mask)))
        .collect();
    let mut out = Vec::new();
    if !indep[0] {
        out.push("the empty set is dependent".to_string());
    }
    let mut max_size = 0;
    for mask in 0..subsets {
        if !indep[mask as usize] {
            continue;
        }
        max_size = max_size.max(mask.count_ones() as usize);
        for e in 0..l {
            if mask >> e & 1 == 1 && !indep[(mask & !(1 << e)) as usize] {
                out.push(format!(
                    "hereditary: {:?} independent, drop {e} is not",
                    items_of(mask)
                ));
            }
        }
        if let Ok(set) = m.set_from(&items_of(mask)) {
            for e in (0..l).filter(|e| mask >> e & 1 == 0) {
                if set.can_insert(e) != indep[(mask | 1 << e) as usize] {
                    out.push(format!(
                        "tracker disagrees with the oracle on {:?} + {e}",
                        items_of(mask)
                    ));
                }
            }
        } else {
            out.push(format!(
                "tracker rejects independent set {:?}",
                items_of(mask)
            ));
        }
    }
    for i in 0..subsets {
        if !indep[i as usize] {
            continue;
        }
        for j in 0..subsets {
            if !indep[j as usize] || j.count_ones() <= i.count_ones() {
                continue;
            }
            let extra = j & !i;
            if !(0..l).any(|e| extra >> e & 1 == 1 && indep[(i | 1 << e) as usize]) {
                out.push(format!(
                    "augmentation: {:?} cannot grow from {:?}",
                    items_of(i),
                    items_of(j)
                ));
            }
        }
    }
    if max_size != m.rank() {
        out.push(format!(
            "rank {} but the largest independent set has {max_size} items",
            m.rank()
        ));
    }
    out.truncate(20);
    out
}

/// Mismatches between greedy and brute force for `weights`.
pub fn greedy_violation(m: &Matroid, weights: &[f64]) -> Result<Option<String>> {
    let greedy = greedy_max_basis(m, weights);
    let (best, best_value) = brute_force_max_basis(m, weights)?;
    let value = evaluate_modular(&greedy, weights);
    if !m.is_basis(&greedy)? {
        return Ok(Some(format!("greedy output {greedy:?} is not a basis")));
    }
    if (value - best_value).abs() > 1e-12 {
        return Ok(Some(format!(
            "greedy {greedy:?} weighs {value}, brute force {best:?} weighs {best_value}"
        )));
    }
    Ok(None)
}

/// Random basis: greedy under uniform random weights.
pub fn random_basis<R: Rng + ?Sized>(m: &Matroid, rng: &mut R) -> Vec<usize> {
    let w: Vec<f64> = (0..m.len()).map(|_| rng.random()).collect();
    greedy_max_basis(m, &w)
}

/// Builds the bijection between two bases and checks its invariants.
pub fn bijection_violation(m: &Matroid, optimal: &[usize], chosen: &[usize]) -> Option<String> {
    match ExchangeBijection::construct(m, optimal, chosen) {
        Ok(b) => {
            let v = b.violations(m, optimal, chosen);
            (!v.is_empty()).then(|| format!("{optimal:?} vs {chosen:?}: {v:?}"))
        }
        Err(e) => Some(format!("{optimal:?} vs {chosen:?}: {e}")),
    }
}

/// Checks the regret decomposition for `chosen` under random means.
fn decomposition_violation(m: &Matroid, mean: &[f64], chosen: &[usize]) -> Result<Option<String>> {
    let profile = compute_gap_profile(m, mean);
    let report = decomposition_check_with(&profile, m, mean, chosen)?;
    Ok((!report.holds()).then(|| format!("{chosen:?}: {}", report.violations.join("; "))))
}

fn random_weights<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    // coarse values make ties common
    (0..len)
        .map(|_| f64::from(rng.random_range(0..8u8)) / 8.0)
        .collect()
}

/// Runs every suite on `instance` plus `random_cases` random instances per
/// family.
pub fn verify_instance(
    instance: &Instance,
    random_cases: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = &instance.matroid;
    let mean = instance.environment.mean_vector();

    let mut randoms = Vec::new();
    for family in FAMILIES {
        for _ in 0..random_cases {
            let items = rng.random_range(0..=AXIOM_LIMIT);
            randoms.push(random_matroid(family, items, &mut rng)?);
        }
    }

    let mut axioms = SuiteResult {
        name: "matroid axioms",
        cases: 0,
        failures: Vec::new(),
    };
    if m.len() <= AXIOM_LIMIT {
        axioms.cases += 1;
        axioms.failures.extend(axiom_violations(m));
    }
    for r in &randoms {
        axioms.cases += 1;
        axioms.failures.extend(
            axiom_violations(r)
                .into_iter()
                .map(|v| format!("{}: {v}", r.family_name())),
        );
    }

    let mut greedy = SuiteResult {
        name: "greedy vs brute force",
        cases: 0,
        failures: Vec::new(),
    };
    if m.len() <= crate::greedy::BRUTE_FORCE_LIMIT {
        greedy.cases += 1;
        greedy.failures.extend(greedy_violation(m, mean)?);
    }
    for r in &randoms {
        let w = random_weights(r.len(), &mut rng);
        greedy.cases += 1;
        greedy.failures.extend(greedy_violation(r, &w)?);
    }

    let mut bijection = SuiteResult {
        name: "exchange bijection",
        cases: 0,
        failures: Vec::new(),
    };
    let mut decomposition = SuiteResult {
        name: "regret decomposition",
        cases: 0,
        failures: Vec::new(),
    };
    let optimal = compute_gap_profile(m, mean).optimal().to_vec();
    for _ in 0..200 {
        let chosen = random_basis(m, &mut rng);
        bijection.cases += 1;
        bijection
            .failures
            .extend(bijection_violation(m, &optimal, &chosen));
        decomposition.cases += 1;
        decomposition
            .failures
            .extend(decomposition_violation(m, mean, &chosen)?);
    }
    for r in &randoms {
        let w = random_weights(r.len(), &mut rng);
        for _ in 0..5 {
            let a = random_basis(r, &mut rng);
            let b = random_basis(r, &mut rng);
            bijection.cases += 1;
            bijection.failures.extend(bijection_violation(r, &a, &b));
            decomposition.cases += 1;
            decomposition
                .failures
                .extend(decomposition_violation(r, &w, &b)?);
        }
    }

    Ok(VerifyReport {
        suites: vec![axioms, greedy, bijection, decomposition],
    })
}
