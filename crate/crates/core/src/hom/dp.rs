//! Homomorphism sums over a nice tree decomposition.
//!
//! The heuristic decomposition is normalised into leaf / introduce / forget /
//! join nodes with an empty root bag. Each table maps an assignment of the
//! node's bag (in sorted vertex order) to the weighted number of partial
//! homomorphisms of the vertices below it.
//!
//! Zero-weight pairs are pruned when a vertex is introduced. When weights
//! are not all one, an edge's weight is multiplied in exactly once, at the
//! forget node of whichever endpoint leaves first; the other endpoint is
//! still in the bag there.

use std::collections::HashMap;
use std::ops::{AddAssign, Mul};

use num_traits::{One, Zero};

use super::treedec::TreeDecomposition;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce { vertex: usize, child: usize },
    Forget { vertex: usize, child: usize },
    Join { left: usize, right: usize },
}

/// Nodes are stored children-first; the last node is the root.
#[derive(Debug, Clone)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub bags: Vec<Vec<usize>>,
}

impl NiceDecomposition {
    /// `td` must already be valid.
    pub fn from_decomposition(td: &TreeDecomposition) -> Self {
        let mut nice = NiceDecomposition {
            nodes: Vec::new(),
            bags: Vec::new(),
        };
        if td.bags.is_empty() {
            nice.push(NiceNode::Leaf, Vec::new());
            return nice;
        }
        let adj = td.tree_adjacency();
        // Iterative post-order from bag 0.
        let mut parent = vec![usize::MAX; td.bags.len()];
        let mut order = Vec::with_capacity(td.bags.len());
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(t) = stack.pop() {
            order.push(t);
            for &c in &adj[t] {
                if parent[c] == usize::MAX {
                    parent[c] = t;
                    stack.push(c);
                }
            }
        }
        let mut built = vec![usize::MAX; td.bags.len()];
        for &t in order.iter().rev() {
            let target = &td.bags[t];
            let mut tops: Vec<usize> = adj[t]
                .iter()
                .filter(|&&c| c != 0 && parent[c] == t)
                .map(|&c| nice.morph(built[c], target))
                .collect();
            if tops.is_empty() {
                let leaf = nice.push(NiceNode::Leaf, Vec::new());
                tops.push(nice.morph(leaf, target));
            }
            let mut acc = tops[0];
            for &other in &tops[1..] {
                acc = nice.push(NiceNode::Join { left: acc, right: other }, target.clone());
            }
            built[t] = acc;
        }
        nice.morph(built[0], &[]);
        nice
    }

    fn push(&mut self, node: NiceNode, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    /// Forgets, then introduces, until the bag equals `target`.
    fn morph(&mut self, mut node: usize, target: &[usize]) -> usize {
        let current = self.bags[node].clone();
        for &v in current.iter().filter(|v| !target.contains(v)) {
            let bag: Vec<usize> = self.bags[node].iter().copied().filter(|&x| x != v).collect();
            node = self.push(NiceNode::Forget { vertex: v, child: node }, bag);
        }
        for &v in target.iter().filter(|v| !current.contains(v)) {
            let mut bag = self.bags[node].clone();
            let at = bag.partition_point(|&x| x < v);
            bag.insert(at, v);
            node = self.push(NiceNode::Introduce { vertex: v, child: node }, bag);
        }
        node
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

type Table<T> = HashMap<Vec<u32>, T>;

/// `Σ_{x: V(H) -> [n]} Π_{uv ∈ E(H)} weight(x_u, x_v)`, where `weight`
/// returns `None` for zero. With `unit_weights`, every `Some` is taken to be
/// one and no multiplication happens.
pub fn weighted_hom_sum<T, W>(h: &Graph, n: usize, td: &TreeDecomposition, weight: W, unit_weights: bool) -> T
where
    T: Clone + Zero + One + AddAssign + for<'a> Mul<&'a T, Output = T>,
    W: Fn(usize, usize) -> Option<T>,
{
    let nice = NiceDecomposition::from_decomposition(td);
    let mut tables: Vec<Option<Table<T>>> = vec![None; nice.nodes.len()];
    for id in 0..nice.nodes.len() {
        let bag = &nice.bags[id];
        let table = match &nice.nodes[id] {
            NiceNode::Leaf => {
                let mut t = Table::new();
                t.insert(Vec::new(), T::one());
                t
            }
            &NiceNode::Introduce { vertex, child } => {
                let child_table = tables[child].take().unwrap();
                let at = bag.iter().position(|&x| x == vertex).unwrap();
                let linked: Vec<(usize, usize)> = bag
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| u != vertex && h.has_edge(u, vertex))
                    .map(|(i, _)| (i, if i > at { i - 1 } else { i }))
                    .collect();
                let mut t = Table::with_capacity(child_table.len());
                for (key, val) in child_table {
                    for x in 0..n {
                        if linked
                            .iter()
                            .all(|&(_, ci)| weight(key[ci] as usize, x).is_some())
                        {
                            let mut k = key.clone();
                            k.insert(at, x as u32);
                            t.insert(k, val.clone());
                        }
                    }
                }
                t
            }
            &NiceNode::Forget { vertex, child } => {
                let child_table = tables[child].take().unwrap();
                let child_bag = &nice.bags[child];
                let at = child_bag.iter().position(|&x| x == vertex).unwrap();
                let linked: Vec<usize> = child_bag
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| u != vertex && h.has_edge(u, vertex))
                    .map(|(i, _)| i)
                    .collect();
                let mut t: Table<T> = Table::new();
                for (mut key, mut val) in child_table {
                    if !unit_weights {
                        let x = key[at] as usize;
                        for &i in &linked {
                            let w = weight(key[i] as usize, x).expect("pruned at introduce");
                            val = val * &w;
                        }
                    }
                    key.remove(at);
                    match t.get_mut(&key) {
                        Some(acc) => *acc += val,
                        None => {
                            t.insert(key, val);
                        }
                    }
                }
                t
            }
            &NiceNode::Join { left, right } => {
                let a = tables[left].take().unwrap();
                let b = tables[right].take().unwrap();
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                small
                    .into_iter()
                    .filter_map(|(k, v)| large.get(&k).map(|w| (k, v * w)))
                    .collect()
            }
        };
        tables[id] = Some(table);
    }
    tables[nice.root()]
        .take()
        .unwrap()
        .remove(&Vec::new())
        .unwrap_or_else(T::zero)
}
