//! Bipartite matching for transversal matroids.
//!
//! Left vertices are ground-set items, right vertices are the sets they may
//! be matched to. A set of items is independent iff some matching saturates it.

/// Matching maintained while items are inserted one at a time. Each insertion
/// costs a single augmenting-path search.
#[derive(Debug, Clone)]
pub(crate) struct IncrementalMatching {
    owner: Vec<Option<usize>>,
}

impl IncrementalMatching {
    pub(crate) fn new(right_vertices: usize) -> Self {
        IncrementalMatching {
            owner: vec![None; right_vertices],
        }
    }

    /// Whether `item` could be added without breaking saturation. Does not
    /// modify the matching.
    pub(crate) fn can_augment(&self, adjacency: &[Vec<usize>], item: usize) -> bool {
        let mut owner = self.owner.clone();
        let mut visited = vec![false; owner.len()];
        augment(adjacency, item, &mut owner, &mut visited)
    }

    /// Matches `item`, rerouting earlier items along an augmenting path.
    /// Returns false (leaving the matching untouched) if no path exists.
    pub(crate) fn insert(&mut self, adjacency: &[Vec<usize>], item: usize) -> bool {
        let mut visited = vec![false; self.owner.len()];
        augment(adjacency, item, &mut self.owner, &mut visited)
    }
}

// Kuhn's search. Assignments are written only on the successful path, so a
// failed search leaves `owner` as it was.
fn augment(
    adjacency: &[Vec<usize>],
    item: usize,
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &right in &adjacency[item] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        let free = match owner[right] {
            None => true,
            Some(other) => augment(adjacency, other, owner, visited),
        };
        if free {
            owner[right] = Some(item);
            return true;
        }
    }
    false
}

/// Maximum matching size of the subgraph induced by `items`, computed with
/// Hopcroft-Karp layered phases. Used by the from-scratch independence check.
pub(crate) fn maximum_matching(
    adjacency: &[Vec<usize>],
    right_vertices: usize,
    items: &[usize],
) -> usize {
    const UNMATCHED: usize = usize::MAX;
    let n = items.len();
    let mut left_match = vec![UNMATCHED; n];
    let mut right_match = vec![UNMATCHED; right_vertices];
    let mut dist = vec![0usize; n];
    let mut size = 0;

    loop {
        // BFS from free left vertices to build layers.
        let mut queue = std::collections::VecDeque::new();
        for (i, d) in dist.iter_mut().enumerate() {
            if left_match[i] == UNMATCHED {
                *d = 0;
                queue.push_back(i);
            } else {
                *d = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &r in &adjacency[items[u]] {
                let v = right_match[r];
                if v == UNMATCHED {
                    found = true;
                } else if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n {
            if left_match[u] == UNMATCHED
                && layered_dfs(
                    u,
                    adjacency,
                    items,
                    &mut left_match,
                    &mut right_match,
                    &mut dist,
                )
            {
                size += 1;
            }
        }
    }
    size
}

fn layered_dfs(
    u: usize,
    adjacency: &[Vec<usize>],
    items: &[usize],
    left_match: &mut [usize],
    right_match: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &adjacency[items[u]] {
        let v = right_match[r];
        let ok = v == usize::MAX
            || (dist[v] == dist[u] + 1
                && layered_dfs(v, adjacency, items, left_match, right_match, dist));
        if ok {
            left_match[u] = r;
            right_match[r] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}
