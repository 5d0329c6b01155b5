use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("bag {bag} names vertex {vertex}, but H has {n} vertices")]
    VertexOutOfRange { bag: usize, vertex: usize, n: usize },
    #[error("bag tree is not a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    VertexNotCovered(usize),
    #[error("edge ({0}, {1}) is in no bag")]
    EdgeNotCovered(usize, usize),
    #[error("bags containing vertex {0} are not connected in the tree")]
    RunningIntersection(usize),
}

/// Bags of `H` arranged on a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// Each bag sorted ascending.
    pub bags: Vec<Vec<usize>>,
    /// Edges between bag indices.
    pub tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; `0` for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the three decomposition axioms plus tree shape.
    pub fn validate(&self, h: &Graph) -> Result<(), DecompositionError> {
        let k = self.bags.len();
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= h.n()) {
                return Err(DecompositionError::VertexOutOfRange {
                    bag: i,
                    vertex: v,
                    n: h.n(),
                });
            }
        }
        if k == 0 {
            return match h.n() {
                0 => Ok(()),
                _ => Err(DecompositionError::VertexNotCovered(0)),
            };
        }
        if self.tree.len() != k - 1 || self.tree.iter().any(|&(a, b)| a >= k || b >= k || a == b) {
            return Err(DecompositionError::NotATree);
        }
        let adj = self.tree_adjacency();
        if connected_within(&adj, &(0..k).collect::<Vec<_>>()) != k {
            return Err(DecompositionError::NotATree);
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for v in 0..h.n() {
            let holding: Vec<usize> = (0..k).filter(|&i| sets[i].contains(&v)).collect();
            if holding.is_empty() {
                return Err(DecompositionError::VertexNotCovered(v));
            }
            if connected_within(&adj, &holding) != holding.len() {
                return Err(DecompositionError::RunningIntersection(v));
            }
        }
        for (u, v) in h.edges() {
            if !sets.iter().any(|s| s.contains(&u) && s.contains(&v)) {
                return Err(DecompositionError::EdgeNotCovered(u, v));
            }
        }
        Ok(())
    }
}

/// Size of the component of `nodes[0]` in the subgraph induced by `nodes`.
fn connected_within(adj: &[Vec<usize>], nodes: &[usize]) -> usize {
    let Some(&start) = nodes.first() else {
        return 0;
    };
    let mut inside = vec![false; adj.len()];
    for &x in nodes {
        inside[x] = true;
    }
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 0;
    while let Some(x) = stack.pop() {
        count += 1;
        for &y in &adj[x] {
            if inside[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    count
}

/// Heuristic decomposition from a min-fill elimination ordering
/// (ties: smaller current degree, then smaller index).
///
/// Eliminating `v` creates the bag `{v} ∪ N(v)`; its parent is the bag of
/// the earliest-eliminated remaining neighbour. Roots of separate components
/// are chained together.
pub fn tree_decomposition(h: &Graph) -> TreeDecomposition {
    let n = h.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| h.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut position = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut elim_nbrs = vec![Vec::new(); n];

    for step in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .unwrap();
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        position[v] = step;
        order.push(v);
        elim_nbrs[v] = nbrs;
    }

    let bags: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut bag = elim_nbrs[v].clone();
            bag.push(v);
            bag.sort_unstable();
            bag
        })
        .collect();
    let mut tree = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        match elim_nbrs[v].iter().min_by_key(|&&u| position[u]) {
            Some(&u) => tree.push((i, position[u])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree.push((w[0], w[1]));
    }
    TreeDecomposition { bags, tree }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}
