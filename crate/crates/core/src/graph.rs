//! Finite simple graphs on dense vertex indices `0..n`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// An undirected simple graph.
///
/// Neighbour lists are kept sorted and a packed adjacency matrix backs
/// [`Graph::has_edge`]. Values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    words: usize,
    matrix: Vec<u64>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            adj: vec![Vec::new(); n],
            words,
            matrix: vec![0; n * words],
            edges: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.insert(u, v);
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    /// Builds from an adjacency predicate evaluated on every pair `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.insert(u, v);
                }
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        g
    }

    fn insert(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            return;
        }
        self.matrix[u * self.words + v / 64] |= 1 << (v % 64);
        self.matrix[v * self.words + u / 64] |= 1 << (u % 64);
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.edges += 1;
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.iter().any(Vec::is_empty)
    }

    /// Induced subgraph; vertex `vertices[i]` becomes vertex `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        Graph::from_edges(vertices.len(), edges).expect("induced subgraph is simple")
    }

    /// Renames vertex `v` to `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("relabelling preserves simplicity")
    }

    /// Vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.n(), edges).expect("union of simple graphs")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(bipartitions(self), BipartiteStructure::Bipartite(_))
    }

    /// Breadth-first order covering every component, each started at its
    /// smallest vertex.
    pub fn bfs_order(&self) -> Vec<usize> {
        self.components()
            .into_iter()
            .flat_map(|comp| {
                let mut order = Vec::with_capacity(comp.len());
                let mut seen = std::collections::HashSet::new();
                let mut queue = VecDeque::from([comp[0]]);
                seen.insert(comp[0]);
                while let Some(u) = queue.pop_front() {
                    order.push(u);
                    for &w in &self.adj[u] {
                        if seen.insert(w) {
                            queue.push_back(w);
                        }
                    }
                }
                order
            })
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Result of [`remove_isolated`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    pub graph: Graph,
    /// `kept[i]` is the original index of new vertex `i`.
    pub kept: Vec<usize>,
}

/// Induced subgraph on the non-isolated vertices.
pub fn remove_isolated(g: &Graph) -> Reduced {
    let kept: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
    Reduced {
        graph: g.induced_subgraph(&kept),
        kept,
    }
}

/// A split of all vertices into two sides with every edge crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Bipartition {
    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut side = vec![None; g.n()];
        for (s, list) in [(0u8, &self.side_a), (1u8, &self.side_b)] {
            for &v in list {
                if v >= g.n() || side[v].is_some() {
                    return false;
                }
                side[v] = Some(s);
            }
        }
        side.iter().all(Option::is_some) && g.edges().all(|(u, v)| side[u] != side[v])
    }
}

/// Proper 2-colouring of one connected component. `color0` holds the
/// component's smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentColoring {
    pub color0: Vec<usize>,
    pub color1: Vec<usize>,
}

/// Per-component colourings of a bipartite graph.
///
/// Global bipartitions are indexed by `0..2^c`: bit `i` of the index set
/// means component `i` puts its `color1` class on side A instead of `color0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentColorings {
    pub components: Vec<ComponentColoring>,
}

impl ComponentColorings {
    pub fn assignment_count(&self) -> u128 {
        1u128 << self.components.len()
    }

    pub fn assignment(&self, index: u128) -> Bipartition {
        let mut side_a = Vec::new();
        let mut side_b = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let (a, b) = if index >> i & 1 == 0 {
                (&c.color0, &c.color1)
            } else {
                (&c.color1, &c.color0)
            };
            side_a.extend_from_slice(a);
            side_b.extend_from_slice(b);
        }
        side_a.sort_unstable();
        side_b.sort_unstable();
        Bipartition { side_a, side_b }
    }

    pub fn assignments(&self) -> impl Iterator<Item = Bipartition> + '_ {
        (0..self.assignment_count()).map(|i| self.assignment(i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteStructure {
    Bipartite(ComponentColorings),
    /// Vertices of an odd cycle in cyclic order.
    OddCycle(Vec<usize>),
}

/// Two-colours every component, or returns an odd cycle.
pub fn bipartitions(g: &Graph) -> BipartiteStructure {
    let n = g.n();
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut components = Vec::new();
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(0);
        let mut coloring = ComponentColoring {
            color0: vec![s],
            color1: Vec::new(),
        };
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &w in g.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(1 - cu);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        if cu == 0 {
                            coloring.color1.push(w);
                        } else {
                            coloring.color0.push(w);
                        }
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => {
                        return BipartiteStructure::OddCycle(odd_cycle(&parent, &depth, u, w));
                    }
                    Some(_) => {}
                }
            }
        }
        coloring.color0.sort_unstable();
        coloring.color1.sort_unstable();
        components.push(coloring);
    }
    BipartiteStructure::Bipartite(ComponentColorings { components })
}

fn odd_cycle(parent: &[usize], depth: &[usize], u: usize, w: usize) -> Vec<usize> {
    let (mut x, mut y) = (u, w);
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[x] > depth[y] {
        left.push(x);
        x = parent[x];
    }
    while depth[y] > depth[x] {
        right.push(y);
        y = parent[y];
    }
    while x != y {
        left.push(x);
        right.push(y);
        x = parent[x];
        y = parent[y];
    }
    left.push(x);
    right.reverse();
    left.extend(right);
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(
            Graph::from_edges(2, [(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn symmetric_adjacency() {
        let g = Graph::from_edges(4, [(0, 1), (1, 0), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        for (u, v) in g.edges() {
            assert!(g.has_edge(u, v) && g.has_edge(v, u));
        }
        assert!(!g.has_edge(0, 0));
    }

    #[test]
    fn c6_coloring() {
        match bipartitions(&cycle(6)) {
            BipartiteStructure::Bipartite(c) => {
                assert_eq!(c.components.len(), 1);
                assert_eq!(c.components[0].color0, vec![0, 2, 4]);
                assert_eq!(c.components[0].color1, vec![1, 3, 5]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn c5_odd_cycle() {
        let g = cycle(5);
        match bipartitions(&g) {
            BipartiteStructure::OddCycle(c) => {
                assert_eq!(c.len(), 5);
                for i in 0..c.len() {
                    assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_edges_four_assignments() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let BipartiteStructure::Bipartite(c) = bipartitions(&g) else {
            panic!()
        };
        let all: Vec<_> = c.assignments().collect();
        assert_eq!(all.len(), 4);
        for b in &all {
            assert!(b.is_valid_for(&g));
        }
        assert_eq!(all[0].side_a, vec![0, 2]);
        assert_eq!(all[3].side_a, vec![1, 3]);
    }

    #[test]
    fn isolated_removal() {
        let g = Graph::from_edges(5, [(1, 3)]).unwrap();
        let r = remove_isolated(&g);
        assert_eq!(r.kept, vec![1, 3]);
        assert_eq!(r.graph, Graph::from_edges(2, [(0, 1)]).unwrap());

        let r = remove_isolated(&Graph::empty(4));
        assert_eq!(r.graph.n(), 0);

        let c = cycle(4);
        assert_eq!(remove_isolated(&c).graph, c);
    }
}
