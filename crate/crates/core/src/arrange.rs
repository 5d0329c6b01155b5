//! Tree-arrangeability of bipartite graphs.
//!
//! Side `A` of a bipartite graph is arrangeable on a tree `T` over `A` when,
//! for every pair `u, v` and the `T`-path `P` between them, the
//! neighbourhoods satisfy `Λ_u ∩ Λ_v = ∩_{w ∈ P} Λ_w`. Equivalently, for
//! every `b ∈ B` the support `S_b = {a : b ∈ Λ_a}` induces a subtree of `T`,
//! which makes `T` a junction tree for the sets `Λ_a`.
//!
//! Deciding existence uses the junction-tree characterisation: a maximum
//! weight spanning tree under weights `|Λ_u ∩ Λ_v|` is a junction tree
//! whenever one exists. Any spanning tree has weight at most
//! `Σ_b (|S_b| - 1)`, with equality exactly when every support is connected.
//!
//! The decider only answers arrangeability. A bipartite graph that is not
//! tree-arrangeable (for example `C_6`) may still satisfy Sidorenko's
//! inequality.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{bipartitions, BipartiteStructure, Bipartition, ComponentColorings, Graph};

/// Edges of a tree on side `A`, by vertex id.
pub type TreeEdges = Vec<(usize, usize)>;

/// Upper bound on non-trivial components for the side-assignment search.
pub const MAX_COMPONENTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangeError {
    #[error("graph is not bipartite (odd cycle {0:?})")]
    NotBipartite(Vec<usize>),
    #[error("vertices {0} and {1} of the chosen side are adjacent")]
    NotIndependent(usize, usize),
    #[error("vertex {0} is not on side A")]
    UnknownVertex(usize),
    #[error("tree on {vertices} vertices has {edges} edges")]
    WrongEdgeCount { vertices: usize, edges: usize },
    #[error("tree edges contain a cycle through ({0}, {1})")]
    Cycle(usize, usize),
    #[error("{0} non-trivial components exceed the search limit")]
    TooManyComponents(usize),
}

/// Side `A` of a bipartite graph with the neighbourhood `Λ_a` of each `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodFamily {
    side_a: Vec<usize>,
    lambda: Vec<BTreeSet<usize>>,
}

impl NeighborhoodFamily {
    /// Family of `side_a` in `h`; `side_a` must be independent.
    pub fn from_graph(h: &Graph, side_a: &[usize]) -> Result<Self, ArrangeError> {
        let mut ids = side_a.to_vec();
        ids.sort_unstable();
        ids.dedup();
        for (i, &u) in ids.iter().enumerate() {
            if u >= h.n() {
                return Err(ArrangeError::UnknownVertex(u));
            }
            if let Some(&v) = ids[i + 1..].iter().find(|&&v| h.has_edge(u, v)) {
                return Err(ArrangeError::NotIndependent(u, v));
            }
        }
        let lambda = ids.iter().map(|&a| h.neighbors(a).iter().copied().collect()).collect();
        Ok(NeighborhoodFamily { side_a: ids, lambda })
    }

    /// Family from explicit `(a, Λ_a)` pairs. Later duplicates of an id win.
    pub fn from_sets<I, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = (usize, S)>,
        S: IntoIterator<Item = usize>,
    {
        let map: BTreeMap<usize, BTreeSet<usize>> =
            sets.into_iter().map(|(a, s)| (a, s.into_iter().collect())).collect();
        let (side_a, lambda) = map.into_iter().unzip();
        NeighborhoodFamily { side_a, lambda }
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn len(&self) -> usize {
        self.side_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_a.is_empty()
    }

    pub fn position(&self, a: usize) -> Option<usize> {
        self.side_a.binary_search(&a).ok()
    }

    /// `Λ_a`. Panics if `a` is not in the family.
    pub fn lambda(&self, a: usize) -> &BTreeSet<usize> {
        let i = self.position(a).unwrap_or_else(|| panic!("{a} is not on side A"));
        &self.lambda[i]
    }

    pub fn common(&self, u: usize, v: usize) -> BTreeSet<usize> {
        self.lambda(u).intersection(self.lambda(v)).copied().collect()
    }

    /// `b ↦ S_b` over every `b` in some neighbourhood.
    pub fn supports(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, set) in self.lambda.iter().enumerate() {
            for &b in set {
                out.entry(b).or_default().push(self.side_a[i]);
            }
        }
        out
    }

    /// Sub-family on the listed vertices.
    pub fn restrict(&self, keep: &[usize]) -> NeighborhoodFamily {
        NeighborhoodFamily::from_sets(keep.iter().map(|&a| (a, self.lambda(a).clone())))
    }

    /// `Σ_b (|S_b| - 1)`: the weight any junction tree reaches.
    pub fn support_bound(&self) -> usize {
        self.supports().values().map(|s| s.len() - 1).sum()
    }

    /// Total `|Λ_u ∩ Λ_v|` over tree edges.
    pub fn tree_weight(&self, tree: &[(usize, usize)]) -> usize {
        tree.iter().map(|&(u, v)| self.common(u, v).len()).sum()
    }
}

/// Where a tree fails: `b`'s support is disconnected, so the path between
/// two of its supporters misses `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub b: usize,
    pub support: Vec<usize>,
    pub u: usize,
    pub v: usize,
    /// Tree path from `u` to `v`, inclusive.
    pub path: Vec<usize>,
    pub path_intersection: Vec<usize>,
    pub endpoint_intersection: Vec<usize>,
}

impl Violation {
    /// Recomputes both intersections from `fam` and confirms they differ.
    pub fn recheck(&self, fam: &NeighborhoodFamily, tree: &[(usize, usize)]) -> bool {
        let Ok(adj) = tree_adjacency(fam, tree) else {
            return false;
        };
        if tree_path(fam, &adj, self.u, self.v) != self.path {
            return false;
        }
        let along = path_intersection(fam, &self.path);
        let ends = fam.common(self.u, self.v);
        along != ends
            && along.into_iter().collect::<Vec<_>>() == self.path_intersection
            && ends.into_iter().collect::<Vec<_>>() == self.endpoint_intersection
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementCheck {
    pub holds: bool,
    pub violation: Option<Violation>,
}

type Adjacency = BTreeMap<usize, Vec<usize>>;

/// Validates that `tree` spans `fam`'s side and returns its adjacency.
fn tree_adjacency(fam: &NeighborhoodFamily, tree: &[(usize, usize)]) -> Result<Adjacency, ArrangeError> {
    let k = fam.len();
    if k > 0 && tree.len() != k - 1 || k == 0 && !tree.is_empty() {
        return Err(ArrangeError::WrongEdgeCount {
            vertices: k,
            edges: tree.len(),
        });
    }
    let mut root: Vec<usize> = (0..k).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut adj: Adjacency = fam.side_a.iter().map(|&a| (a, Vec::new())).collect();
    for &(u, v) in tree {
        let pu = fam.position(u).ok_or(ArrangeError::UnknownVertex(u))?;
        let pv = fam.position(v).ok_or(ArrangeError::UnknownVertex(v))?;
        let (ru, rv) = (find(&mut root, pu), find(&mut root, pv));
        if ru == rv {
            return Err(ArrangeError::Cycle(u, v));
        }
        root[ru] = rv;
        adj.get_mut(&u).unwrap().push(v);
        adj.get_mut(&v).unwrap().push(u);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    Ok(adj)
}

fn tree_path(fam: &NeighborhoodFamily, adj: &Adjacency, u: usize, v: usize) -> Vec<usize> {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    parent.insert(u, u);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        for &y in &adj[&x] {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    debug_assert!(fam.position(v).is_some());
    let mut path = vec![v];
    let mut x = v;
    while x != u {
        x = parent[&x];
        path.push(x);
    }
    path.reverse();
    path
}

fn path_intersection(fam: &NeighborhoodFamily, path: &[usize]) -> BTreeSet<usize> {
    let mut acc = fam.lambda(path[0]).clone();
    for &w in &path[1..] {
        acc = acc.intersection(fam.lambda(w)).copied().collect();
    }
    acc
}

/// Decides whether `fam` is arrangeable on `tree` by checking that every
/// support set is connected in the tree. On failure the violating `b` and
/// a broken path are returned.
pub fn check_arrangement(fam: &NeighborhoodFamily, tree: &[(usize, usize)]) -> Result<ArrangementCheck, ArrangeError> {
    let adj = tree_adjacency(fam, tree)?;
    for (b, support) in fam.supports() {
        let inside: BTreeSet<usize> = support.iter().copied().collect();
        let mut seen = BTreeSet::from([support[0]]);
        let mut stack = vec![support[0]];
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if inside.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() < support.len() {
            let u = support[0];
            let v = *support.iter().find(|a| !seen.contains(a)).unwrap();
            let path = tree_path(fam, &adj, u, v);
            let violation = Violation {
                b,
                u,
                v,
                path_intersection: path_intersection(fam, &path).into_iter().collect(),
                endpoint_intersection: fam.common(u, v).into_iter().collect(),
                path,
                support,
            };
            return Ok(ArrangementCheck {
                holds: false,
                violation: Some(violation),
            });
        }
    }
    Ok(ArrangementCheck {
        holds: true,
        violation: None,
    })
}

/// A pair whose tree path breaks the intersection condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathViolation {
    pub u: usize,
    pub v: usize,
    pub path: Vec<usize>,
}

/// Direct evaluation of `Λ_u ∩ Λ_v = ∩_{w ∈ P} Λ_w` over all pairs.
/// Quadratic in `|A|`; kept as the reference for [`check_arrangement`].
pub fn check_path_condition(
    fam: &NeighborhoodFamily,
    tree: &[(usize, usize)],
) -> Result<Option<PathViolation>, ArrangeError> {
    let adj = tree_adjacency(fam, tree)?;
    for (i, &u) in fam.side_a.iter().enumerate() {
        for &v in &fam.side_a[i + 1..] {
            let path = tree_path(fam, &adj, u, v);
            if path_intersection(fam, &path) != fam.common(u, v) {
                return Ok(Some(PathViolation { u, v, path }));
            }
        }
    }
    Ok(None)
}

/// Maximum-weight spanning tree on side `A` under `|Λ_u ∩ Λ_v|` (Kruskal).
/// Ties break by ascending `(u, v)` with `u < v`.
pub fn mwst_candidate_tree(fam: &NeighborhoodFamily) -> TreeEdges {
    let k = fam.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let w = fam.lambda[i].intersection(&fam.lambda[j]).count();
            pairs.push((w, i, j));
        }
    }
    pairs.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut root: Vec<usize> = (0..k).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(k.saturating_sub(1));
    for (_, i, j) in pairs {
        let (ri, rj) = (find(&mut root, i), find(&mut root, j));
        if ri != rj {
            root[ri] = rj;
            tree.push((fam.side_a[i], fam.side_a[j]));
            if tree.len() + 1 == k {
                break;
            }
        }
    }
    tree
}

/// Maximal neighbourhoods and how the rest hang off them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborCovering {
    /// One representative (the smallest id) per maximal neighbourhood.
    pub representatives: Vec<usize>,
    /// `(a, u)` for every `a` outside the representatives, with `Λ_a ⊆ Λ_u`.
    pub attachments: Vec<(usize, usize)>,
}

impl NeighborCovering {
    /// Adds each attached vertex as a leaf of `tree`.
    pub fn extend_tree(&self, tree: &[(usize, usize)]) -> TreeEdges {
        let mut out = tree.to_vec();
        out.extend(self.attachments.iter().copied());
        out
    }
}

pub fn neighbor_covering_reduction(fam: &NeighborhoodFamily) -> (NeighborhoodFamily, NeighborCovering) {
    let k = fam.len();
    let mut representatives = Vec::new();
    for i in 0..k {
        let li = &fam.lambda[i];
        let dominated = (0..k).any(|j| {
            let lj = &fam.lambda[j];
            j != i && li.is_subset(lj) && (li.len() < lj.len() || j < i)
        });
        if !dominated {
            representatives.push(fam.side_a[i]);
        }
    }
    let attachments = fam
        .side_a
        .iter()
        .filter(|a| !representatives.contains(a))
        .map(|&a| {
            let u = *representatives
                .iter()
                .find(|&&u| fam.lambda(a).is_subset(fam.lambda(u)))
                .expect("every neighbourhood sits under a maximal one");
            (a, u)
        })
        .collect();
    let reduced = fam.restrict(&representatives);
    (
        reduced,
        NeighborCovering {
            representatives,
            attachments,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Arrangeable,
    NotArrangeable,
}

/// Why one side assignment failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideRefutation {
    pub assignment: u128,
    pub side_a: Vec<usize>,
    pub representatives: Vec<usize>,
    /// Maximum-weight spanning tree on the representatives.
    pub candidate_tree: TreeEdges,
    pub violation: Violation,
    pub tree_weight: usize,
    pub support_bound: usize,
}

impl SideRefutation {
    /// Rebuilds the reduced family from `h` and re-verifies the broken path
    /// and the weight deficit.
    pub fn recheck(&self, h: &Graph) -> bool {
        let Ok(fam) = NeighborhoodFamily::from_graph(h, &self.side_a) else {
            return false;
        };
        let reduced = fam.restrict(&self.representatives);
        self.violation.recheck(&reduced, &self.candidate_tree)
            && reduced.tree_weight(&self.candidate_tree) == self.tree_weight
            && reduced.support_bound() == self.support_bound
            && self.tree_weight < self.support_bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementCertificate {
    pub outcome: Outcome,
    /// Side assignment index that produced the witness.
    pub assignment: Option<u128>,
    pub bipartition: Option<Bipartition>,
    /// Spanning tree on `bipartition.side_a`.
    pub tree: Option<TreeEdges>,
    /// One entry per side assignment; empty when arrangeable.
    pub refutations: Vec<SideRefutation>,
}

impl ArrangementCertificate {
    pub fn is_arrangeable(&self) -> bool {
        self.outcome == Outcome::Arrangeable
    }

    /// Re-verifies the certificate against `h` without rerunning the search.
    pub fn recheck(&self, h: &Graph) -> bool {
        match self.outcome {
            Outcome::Arrangeable => {
                let (Some(bip), Some(tree)) = (&self.bipartition, &self.tree) else {
                    return false;
                };
                bip.is_valid_for(h)
                    && NeighborhoodFamily::from_graph(h, &bip.side_a)
                        .and_then(|fam| check_arrangement(&fam, tree))
                        .is_ok_and(|c| c.holds)
            }
            Outcome::NotArrangeable => !self.refutations.is_empty() && self.refutations.iter().all(|r| r.recheck(h)),
        }
    }
}

/// Side assignments explored by the decider. Isolated vertices are pinned
/// to side A, since an empty neighbourhood attaches anywhere as a leaf.
pub fn side_assignments(h: &Graph) -> Result<ComponentColorings, ArrangeError> {
    let colorings = match bipartitions(h) {
        BipartiteStructure::OddCycle(c) => return Err(ArrangeError::NotBipartite(c)),
        BipartiteStructure::Bipartite(c) => c,
    };
    let (isolated, mut components): (Vec<_>, Vec<_>) = colorings
        .components
        .into_iter()
        .partition(|c| c.color0.len() + c.color1.len() == 1);
    if components.len() > MAX_COMPONENTS {
        return Err(ArrangeError::TooManyComponents(components.len()));
    }
    if !isolated.is_empty() {
        // A pinned pseudo-component never flips: it is appended last and
        // the assignment indices stop short of its bit.
        let color0 = isolated.iter().flat_map(|c| c.color0.iter().copied()).collect();
        components.push(crate::graph::ComponentColoring {
            color0,
            color1: Vec::new(),
        });
    }
    Ok(ComponentColorings { components })
}

fn assignment_count(h: &Graph, colorings: &ComponentColorings) -> u128 {
    let pinned = h.has_isolated_vertex() as u32;
    colorings.assignment_count() >> pinned
}

/// Searches every side assignment for a tree arrangement.
///
/// Per assignment: neighbour-covering reduction, then the maximum-weight
/// spanning tree on the representatives, then [`check_arrangement`]. The
/// first success (lowest assignment index) is extended to all of `A` by
/// leaf attachment and returned.
pub fn decide_tree_arrangeable(h: &Graph) -> Result<ArrangementCertificate, ArrangeError> {
    let colorings = side_assignments(h)?;
    let mut refutations = Vec::new();
    for index in 0..assignment_count(h, &colorings) {
        let bip = colorings.assignment(index);
        let fam = NeighborhoodFamily::from_graph(h, &bip.side_a)?;
        let (reduced, covering) = neighbor_covering_reduction(&fam);
        let candidate = mwst_candidate_tree(&reduced);
        let check = check_arrangement(&reduced, &candidate)?;
        if check.holds {
            return Ok(ArrangementCertificate {
                outcome: Outcome::Arrangeable,
                assignment: Some(index),
                tree: Some(covering.extend_tree(&candidate)),
                bipartition: Some(bip),
                refutations: Vec::new(),
            });
        }
        refutations.push(SideRefutation {
            assignment: index,
            tree_weight: reduced.tree_weight(&candidate),
            support_bound: reduced.support_bound(),
            side_a: bip.side_a,
            representatives: covering.representatives,
            candidate_tree: candidate,
            violation: check.violation.expect("failed check carries a violation"),
        });
    }
    Ok(ArrangementCertificate {
        outcome: Outcome::NotArrangeable,
        assignment: None,
        bipartition: None,
        tree: None,
        refutations,
    })
}

/// Every labelled spanning tree on `vertices` (Prüfer decoding), in
/// lexicographic order of the Prüfer sequence.
pub fn labeled_trees(vertices: &[usize]) -> Vec<TreeEdges> {
    let k = vertices.len();
    if k <= 1 {
        return vec![Vec::new()];
    }
    if k == 2 {
        return vec![vec![(vertices[0], vertices[1])]];
    }
    let total = k.pow(k as u32 - 2);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; k - 2];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut().rev() {
            *s = c % k;
            c /= k;
        }
        out.push(
            prufer_decode(&seq, k)
                .into_iter()
                .map(|(a, b)| (vertices[a], vertices[b]))
                .collect(),
        );
    }
    out
}

fn prufer_decode(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &s in seq {
        let leaf = (0..k).find(|&x| degree[x] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&x| degree[x] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}
