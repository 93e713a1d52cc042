//! Matroids over the ground set `{0, .., L-1}` and their independence oracles.
//!
//! Five families are supported: uniform, partition, graphic, transversal and
//! linear. Each family answers independence queries two ways: a from-scratch
//! check ([`Matroid::is_independent`]) and an incremental tracker
//! ([`IndependentSet`]) used by greedy construction. The two must agree.

mod linear;
mod matching;
mod union_find;

use crate::error::{Error, Result};

use self::linear::{exact_rank, Echelon};
use self::matching::{maximum_matching, IncrementalMatching};
use self::union_find::UnionFind;

/// Family-specific description of a matroid.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Any set of at most `rank` items.
    Uniform { rank: usize },
    /// Item `e` lives in block `block_of[e]`; block `b` admits at most
    /// `capacities[b]` items.
    Partition {
        block_of: Vec<usize>,
        capacities: Vec<usize>,
    },
    /// Item `e` is the edge `edges[e]`; independent sets are forests.
    /// Parallel edges and self-loops are allowed.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Item `e` is a left vertex adjacent to `adjacency[e]`; independent sets
    /// are the matchable ones.
    Transversal {
        right_vertices: usize,
        adjacency: Vec<Vec<usize>>,
    },
    /// Item `e` is the integer vector `columns[e]`; independence is linear
    /// independence over the rationals.
    Linear {
        dimension: usize,
        columns: Vec<Vec<i64>>,
    },
}

/// An immutable matroid. The rank is computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Matroid {
    ground_set_size: usize,
    family: Family,
    rank: usize,
}

impl Matroid {
    pub fn uniform(items: usize, rank: usize) -> Result<Self> {
        Self::from_family(items, Family::Uniform { rank })
    }

    pub fn partition(block_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        Self::from_family(
            block_of.len(),
            Family::Partition {
                block_of,
                capacities,
            },
        )
    }

    /// Partition matroid where every block has capacity one.
    pub fn unit_partition(block_of: Vec<usize>) -> Result<Self> {
        let blocks = block_of.iter().map(|&b| b + 1).max().unwrap_or(0);
        Self::partition(block_of, vec![1; blocks])
    }

    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_family(edges.len(), Family::Graphic { vertices, edges })
    }

    pub fn transversal(right_vertices: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_family(
            adjacency.len(),
            Family::Transversal {
                right_vertices,
                adjacency,
            },
        )
    }

    pub fn linear(dimension: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_family(columns.len(), Family::Linear { dimension, columns })
    }

    fn from_family(ground_set_size: usize, family: Family) -> Result<Self> {
        validate(&family)?;
        let mut m = Matroid {
            ground_set_size,
            family,
            rank: 0,
        };
        let mut set = m.empty_set();
        for e in 0..ground_set_size {
            set.insert(e);
        }
        m.rank = set.len();
        Ok(m)
    }

    /// Number of items `L` in the ground set.
    pub fn len(&self) -> usize {
        self.ground_set_size
    }

    pub fn is_empty(&self) -> bool {
        self.ground_set_size == 0
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Uniform { .. } => "uniform",
            Family::Partition { .. } => "partition",
            Family::Graphic { .. } => "graphic",
            Family::Transversal { .. } => "transversal",
            Family::Linear { .. } => "linear",
        }
    }

    /// Size `K` of every basis.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Rejects out-of-range and repeated items.
    pub fn check_items(&self, items: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.ground_set_size];
        for &e in items {
            if e >= self.ground_set_size {
                return Err(Error::ItemOutOfRange {
                    item: e,
                    ground_set_size: self.ground_set_size,
                });
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::DuplicateItem(e));
            }
        }
        Ok(())
    }

    /// From-scratch independence check.
    pub fn is_independent(&self, items: &[usize]) -> Result<bool> {
        self.check_items(items)?;
        Ok(self.independent_unchecked(items))
    }

    pub(crate) fn independent_unchecked(&self, items: &[usize]) -> bool {
        match &self.family {
            Family::Uniform { rank } => items.len() <= *rank,
            Family::Partition {
                block_of,
                capacities,
            } => {
                let mut counts = vec![0usize; capacities.len()];
                for &e in items {
                    counts[block_of[e]] += 1;
                }
                counts.iter().zip(capacities).all(|(c, cap)| c <= cap)
            }
            Family::Graphic { vertices, edges } => {
                is_forest(*vertices, items.iter().map(|&e| edges[e]))
            }
            Family::Transversal {
                right_vertices,
                adjacency,
            } => maximum_matching(adjacency, *right_vertices, items) == items.len(),
            Family::Linear { dimension, columns } => {
                let cols: Vec<&[i64]> = items.iter().map(|&e| columns[e].as_slice()).collect();
                exact_rank(&cols, *dimension) == items.len()
            }
        }
    }

    /// Whether `items + e` is independent, for an independent `items`.
    pub fn can_extend(&self, items: &[usize], e: usize) -> Result<bool> {
        self.check_items(items)?;
        self.check_items(&[e])?;
        if items.contains(&e) {
            return Err(Error::Contract(format!("item {e} is already in the set")));
        }
        let set = self.set_from(items)?;
        Ok(set.can_insert(e))
    }

    /// Whether `items` is a maximal independent set.
    pub fn is_basis(&self, items: &[usize]) -> Result<bool> {
        Ok(items.len() == self.rank && self.is_independent(items)?)
    }

    /// Incremental tracker starting from the empty set.
    pub fn empty_set(&self) -> IndependentSet<'_> {
        let state = match &self.family {
            Family::Uniform { .. } => Tracker::Counts(vec![0]),
            Family::Partition { capacities, .. } => Tracker::Counts(vec![0; capacities.len()]),
            Family::Graphic { vertices, .. } => Tracker::Forest(UnionFind::new(*vertices)),
            Family::Transversal { right_vertices, .. } => {
                Tracker::Matching(IncrementalMatching::new(*right_vertices))
            }
            Family::Linear { .. } => Tracker::Echelon(Echelon::new()),
        };
        IndependentSet {
            matroid: self,
            items: Vec::new(),
            member: vec![false; self.ground_set_size],
            state,
        }
    }

    /// Tracker seeded with `items`, which must be independent.
    pub fn set_from(&self, items: &[usize]) -> Result<IndependentSet<'_>> {
        self.check_items(items)?;
        let mut set = self.empty_set();
        for &e in items {
            if !set.insert(e) {
                return Err(Error::Contract(format!(
                    "set {items:?} is dependent; cannot extend it"
                )));
            }
        }
        Ok(set)
    }
}

fn validate(family: &Family) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidMatroid(msg));
    match family {
        Family::Uniform { .. } => {}
        Family::Partition {
            block_of,
            capacities,
        } => {
            if let Some((e, &b)) = block_of
                .iter()
                .enumerate()
                .find(|(_, &b)| b >= capacities.len())
            {
                return bad(format!(
                    "item {e} is in block {b} but only {} capacities were given",
                    capacities.len()
                ));
            }
        }
        Family::Graphic { vertices, edges } => {
            if let Some((e, &(u, v))) = edges
                .iter()
                .enumerate()
                .find(|(_, &(u, v))| u >= *vertices || v >= *vertices)
            {
                return bad(format!(
                    "edge {e} = ({u}, {v}) references a vertex outside 0..{vertices}"
                ));
            }
        }
        Family::Transversal {
            right_vertices,
            adjacency,
        } => {
            for (e, adj) in adjacency.iter().enumerate() {
                if let Some(&r) = adj.iter().find(|&&r| r >= *right_vertices) {
                    return bad(format!(
                        "item {e} is adjacent to right vertex {r} outside 0..{right_vertices}"
                    ));
                }
            }
        }
        Family::Linear { dimension, columns } => {
            if let Some((e, c)) = columns
                .iter()
                .enumerate()
                .find(|(_, c)| c.len() != *dimension)
            {
                return bad(format!(
                    "column {e} has length {} but the dimension is {dimension}",
                    c.len()
                ));
            }
        }
    }
    Ok(())
}

/// A graph with `m` edges is a forest iff it has `V - m` connected components.
fn is_forest(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    let mut m = 0;
    for (u, v) in edges {
        if u == v {
            return false;
        }
        adj[u].push(v);
        adj[v].push(u);
        m += 1;
    }
    if m >= vertices.max(1) {
        return false;
    }
    let mut seen = vec![false; vertices];
    let mut components = 0;
    let mut stack = Vec::new();
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    vertices - m == components
}

#[derive(Debug, Clone)]
enum Tracker {
    Counts(Vec<usize>),
    Forest(UnionFind),
    Matching(IncrementalMatching),
    Echelon(Echelon),
}

/// An independent set grown one item at a time, with per-family state that
/// makes each extension query cheap.
#[derive(Debug, Clone)]
pub struct IndependentSet<'m> {
    matroid: &'m Matroid,
    items: Vec<usize>,
    member: Vec<bool>,
    state: Tracker,
}

impl<'m> IndependentSet<'m> {
    pub fn matroid(&self) -> &'m Matroid {
        self.matroid
    }

    /// Items in insertion order.
    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn into_items(self) -> Vec<usize> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.member[e]
    }

    /// True iff the set reached the rank of the matroid.
    pub fn is_basis(&self) -> bool {
        self.items.len() == self.matroid.rank
    }

    /// Whether `e` is not in the set and `set + e` stays independent.
    ///
    /// Panics if `e` is outside the ground set.
    pub fn can_insert(&self, e: usize) -> bool {
        if self.member[e] {
            return false;
        }
        match (&self.matroid.family, &self.state) {
            (Family::Uniform { rank }, Tracker::Counts(c)) => c[0] < *rank,
            (
                Family::Partition {
                    block_of,
                    capacities,
                },
                Tracker::Counts(c),
            ) => c[block_of[e]] < capacities[block_of[e]],
            (Family::Graphic { edges, .. }, Tracker::Forest(uf)) => {
                let (u, v) = edges[e];
                !uf.same(u, v)
            }
            (Family::Transversal { adjacency, .. }, Tracker::Matching(m)) => {
                m.can_augment(adjacency, e)
            }
            (Family::Linear { columns, .. }, Tracker::Echelon(ech)) => {
                match ech.is_outside_span(&columns[e]) {
                    Some(answer) => answer,
                    None => {
                        let mut probe = self.items.clone();
                        probe.push(e);
                        self.matroid.independent_unchecked(&probe)
                    }
                }
            }
            _ => unreachable!("tracker state does not match matroid family"),
        }
    }

    /// Adds `e` if that keeps the set independent. Returns whether it was added.
    pub fn insert(&mut self, e: usize) -> bool {
        if self.member[e] {
            return false;
        }
        let added = match (&self.matroid.family, &mut self.state) {
            (Family::Uniform { rank }, Tracker::Counts(c)) => {
                let ok = c[0] < *rank;
                if ok {
                    c[0] += 1;
                }
                ok
            }
            (
                Family::Partition {
                    block_of,
                    capacities,
                },
                Tracker::Counts(c),
            ) => {
                let b = block_of[e];
                let ok = c[b] < capacities[b];
                if ok {
                    c[b] += 1;
                }
                ok
            }
            (Family::Graphic { edges, .. }, Tracker::Forest(uf)) => {
                let (u, v) = edges[e];
                uf.union(u, v)
            }
            (Family::Transversal { adjacency, .. }, Tracker::Matching(m)) => m.insert(adjacency, e),
            (Family::Linear { columns, .. }, Tracker::Echelon(ech)) => {
                let ok = match ech.is_outside_span(&columns[e]) {
                    Some(answer) => answer,
                    None => {
                        let mut probe = self.items.clone();
                        probe.push(e);
                        self.matroid.independent_unchecked(&probe)
                    }
                };
                if ok {
                    ech.push(&columns[e]);
                }
                ok
            }
            _ => unreachable!("tracker state does not match matroid family"),
        };
        if added {
            self.items.push(e);
            self.member[e] = true;
        }
        added
    }

    /// All items that could currently be inserted, in ascending order.
    pub fn addable(&self) -> Vec<usize> {
        (0..self.matroid.len())
            .filter(|&e| self.can_insert(e))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Matroid {
        Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn graphic_triangle_is_dependent() {
        let m = triangle();
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn graphic_extend_without_cycle() {
        let m = triangle();
        assert!(m.can_extend(&[0], 1).unwrap());
        assert!(!m.can_extend(&[0, 1], 2).unwrap());
    }

    #[test]
    fn self_loop_and_parallel_edges() {
        let m = Matroid::graphic(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!m.is_independent(&[0]).unwrap());
        assert!(m.is_independent(&[1]).unwrap());
        assert!(!m.is_independent(&[1, 2]).unwrap());
        assert!(!m.can_extend(&[], 0).unwrap());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn partition_capacity_one() {
        let m = Matroid::unit_partition(vec![0, 0, 1]).unwrap();
        assert!(!m.is_independent(&[0, 1]).unwrap());
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn partition_general_capacity() {
        let m = Matroid::partition(vec![0, 0, 0, 1], vec![2, 0]).unwrap();
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(!m.is_independent(&[3]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn linear_dependent_triple() {
        let m = Matroid::linear(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!m.is_independent(&[0, 1, 2]).unwrap());
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn linear_zero_column_is_a_loop() {
        let m = Matroid::linear(2, vec![vec![0, 0], vec![3, 1]]).unwrap();
        assert!(!m.is_independent(&[0]).unwrap());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn uniform_cardinality_cap() {
        let m = Matroid::uniform(5, 3).unwrap();
        assert_eq!(m.rank(), 3);
        assert!(!m.can_extend(&[0, 1, 2], 4).unwrap());
        let m = Matroid::uniform(4, 2).unwrap();
        for e in 2..4 {
            assert!(!m.can_extend(&[0, 1], e).unwrap());
        }
    }

    #[test]
    fn uniform_rank_capped_by_ground_set() {
        assert_eq!(Matroid::uniform(2, 5).unwrap().rank(), 2);
        assert_eq!(Matroid::uniform(0, 0).unwrap().rank(), 0);
    }

    #[test]
    fn transversal_matching() {
        // items 0,1 both only reach right 0
        let m = Matroid::transversal(2, vec![vec![0], vec![0], vec![0, 1], vec![]]).unwrap();
        assert!(!m.is_independent(&[0, 1]).unwrap());
        assert!(m.is_independent(&[0, 2]).unwrap());
        assert!(!m.is_independent(&[3]).unwrap());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn connected_graph_rank() {
        let m = Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn errors() {
        let m = triangle();
        assert!(matches!(
            m.is_independent(&[3]),
            Err(Error::ItemOutOfRange { item: 3, .. })
        ));
        assert!(matches!(
            m.is_independent(&[1, 1]),
            Err(Error::DuplicateItem(1))
        ));
        assert!(matches!(
            m.can_extend(&[0, 1, 2], 0),
            Err(Error::Contract(_))
        ));
        assert!(matches!(m.can_extend(&[0, 1], 1), Err(Error::Contract(_))));
        assert!(Matroid::graphic(2, vec![(0, 2)]).is_err());
        assert!(Matroid::partition(vec![0, 1], vec![1]).is_err());
        assert!(Matroid::transversal(1, vec![vec![1]]).is_err());
        assert!(Matroid::linear(2, vec![vec![1]]).is_err());
    }

    #[test]
    fn tracker_addable() {
        let m = triangle();
        let mut s = m.empty_set();
        assert!(s.insert(0));
        assert_eq!(s.addable(), vec![1, 2]);
        assert!(s.insert(2));
        assert!(s.addable().is_empty());
        assert!(s.is_basis());
        assert_eq!(s.items(), &[0, 2]);
    }
}
