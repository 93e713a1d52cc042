//! Slow reference implementations shared by the integration tests. None of
//! them call into the library's independence machinery.

#![allow(dead_code)]

use matroid_bandit::matroid::{Family, Matroid};
use proptest::prelude::*;

/// Independence decided from the family description alone.
pub fn oracle_independent(m: &Matroid, items: &[usize]) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    match m.family() {
        Family::Uniform { rank } => items.len() <= *rank,
        Family::Partition {
            block_of,
            capacities,
        } => capacities
            .iter()
            .enumerate()
            .all(|(b, &cap)| items.iter().filter(|&&e| block_of[e] == b).count() <= cap),
        Family::Graphic { vertices, edges } => {
            is_forest(*vertices, items.iter().map(|&e| edges[e]))
        }
        Family::Transversal { adjacency, .. } => {
            let lists: Vec<&[usize]> = items.iter().map(|&e| adjacency[e].as_slice()).collect();
            has_system_of_distinct_representatives(&lists, &mut Vec::new())
        }
        Family::Linear { columns, dimension } => {
            let cols: Vec<&[i64]> = items.iter().map(|&e| columns[e].as_slice()).collect();
            has_nonzero_minor(&cols, *dimension)
        }
    }
}

/// A forest has exactly `V - components` edges, components counted by DFS.
fn is_forest(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let edges: Vec<(usize, usize)> = edges.collect();
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; vertices];
    let mut components = 0;
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        components += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    edges.len() == vertices - components
}

/// Tries every injective assignment of right vertices.
fn has_system_of_distinct_representatives(lists: &[&[usize]], used: &mut Vec<usize>) -> bool {
    let Some((first, rest)) = lists.split_first() else {
        return true;
    };
    for &r in first.iter() {
        if !used.contains(&r) {
            used.push(r);
            let ok = has_system_of_distinct_representatives(rest, used);
            used.pop();
            if ok {
                return true;
            }
        }
    }
    false
}

/// Columns are independent iff some maximal square minor has a nonzero
/// determinant, computed by Leibniz expansion.
fn has_nonzero_minor(cols: &[&[i64]], dimension: usize) -> bool {
    let k = cols.len();
    if k == 0 {
        return true;
    }
    if k > dimension {
        return false;
    }
    subsets_of_size(dimension, k).into_iter().any(|rows| {
        let matrix: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| cols.iter().map(|c| i128::from(c[r])).collect())
            .collect();
        leibniz_det(&matrix) != 0
    })
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn leibniz_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let term: i128 = (0..n).map(|i| a[i][p[i]]).product();
        total += if inversions % 2 == 0 { term } else { -term };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn mask_items(mask: u32, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask >> i & 1 == 1).collect()
}

/// Independence table over all `2^L` subsets.
pub fn oracle_table(m: &Matroid) -> Vec<bool> {
    (0u32..1 << m.len())
        .map(|mask| oracle_independent(m, &mask_items(mask, m.len())))
        .collect()
}

pub fn oracle_rank(m: &Matroid) -> usize {
    oracle_table(m)
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(mask, _)| (mask as u32).count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Maximum total weight over all bases, by enumeration.
pub fn oracle_max_basis_weight(m: &Matroid, weights: &[f64]) -> f64 {
    let table = oracle_table(m);
    let rank = oracle_rank(m);
    table
        .iter()
        .enumerate()
        .filter(|&(mask, &ok)| ok && (mask as u32).count_ones() as usize == rank)
        .map(|(mask, _)| {
            mask_items(mask as u32, m.len())
                .iter()
                .map(|&e| weights[e])
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Violations of the empty-set, hereditary and augmentation axioms in an
/// independence table.
pub fn axiom_failures(table: &[bool], len: usize) -> usize {
    let mut failures = usize::from(!table[0]);
    for i in 0..table.len() as u32 {
        if !table[i as usize] {
            continue;
        }
        for e in 0..len {
            if i >> e & 1 == 1 && !table[(i & !(1 << e)) as usize] {
                failures += 1;
            }
        }
        for j in 0..table.len() as u32 {
            if table[j as usize] && j.count_ones() > i.count_ones() {
                let extra = j & !i;
                if !(0..len).any(|e| extra >> e & 1 == 1 && table[(i | 1 << e) as usize]) {
                    failures += 1;
                }
            }
        }
    }
    failures
}

pub fn uniform_strategy(max_items: usize) -> impl Strategy<Value = Matroid> {
    (0..=max_items)
        .prop_flat_map(|l| (Just(l), 0..=l))
        .prop_map(|(l, k)| Matroid::uniform(l, k).unwrap())
}

pub fn partition_strategy(max_items: usize) -> impl Strategy<Value = Matroid> {
    (1..=4usize)
        .prop_flat_map(move |blocks| {
            (
                prop::collection::vec(0..blocks, 0..=max_items),
                prop::collection::vec(0..=2usize, blocks),
            )
        })
        .prop_map(|(block_of, caps)| Matroid::partition(block_of, caps).unwrap())
}

pub fn graphic_strategy(max_items: usize) -> impl Strategy<Value = Matroid> {
    (1..=6usize)
        .prop_flat_map(move |v| (Just(v), prop::collection::vec((0..v, 0..v), 0..=max_items)))
        .prop_map(|(v, edges)| Matroid::graphic(v, edges).unwrap())
}

pub fn transversal_strategy(max_items: usize) -> impl Strategy<Value = Matroid> {
    (0..=5usize)
        .prop_flat_map(move |r| {
            (
                Just(r),
                prop::collection::vec(prop::collection::vec(0..r.max(1), 0..=r), 0..=max_items),
            )
        })
        .prop_map(|(r, mut adj)| {
            if r == 0 {
                adj.iter_mut().for_each(Vec::clear);
            }
            for a in &mut adj {
                a.sort_unstable();
                a.dedup();
            }
            Matroid::transversal(r, adj).unwrap()
        })
}

pub fn linear_strategy(max_items: usize) -> impl Strategy<Value = Matroid> {
    (1..=4usize)
        .prop_flat_map(move |d| {
            (
                Just(d),
                prop::collection::vec(prop::collection::vec(-2i64..=2, d), 0..=max_items),
            )
        })
        .prop_map(|(d, cols)| Matroid::linear(d, cols).unwrap())
}

/// Any of the five families.
pub fn matroid_strategy(max_items: usize) -> BoxedStrategy<Matroid> {
    prop_oneof![
        uniform_strategy(max_items),
        partition_strategy(max_items),
        graphic_strategy(max_items),
        transversal_strategy(max_items),
        linear_strategy(max_items),
    ]
    .boxed()
}
