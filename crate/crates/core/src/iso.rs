//! Small-graph isomorphism by backtracking.
//!
//! Both graphs are colour-refined together (1-dimensional Weisfeiler–Leman on
//! their disjoint union) so that the colour classes are comparable; a
//! mismatch in colour histograms refutes isomorphism immediately. Otherwise
//! vertices of the first graph are mapped in BFS order onto same-coloured
//! vertices of the second, checking edges and non-edges against everything
//! already placed. Meant for graphs up to a few dozen vertices.

use std::collections::BTreeMap;

use crate::graph::Graph;

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    find_isomorphism(g1, g2).is_some()
}

/// Returns `m` with `g1.has_edge(u, v) == g2.has_edge(m[u], m[v])`.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    if g1.degree_sequence() != g2.degree_sequence() {
        return None;
    }
    let n = g1.n();
    let colors = refine(&g1.disjoint_union(g2));
    let (c1, c2) = colors.split_at(n);
    let mut h1 = c1.to_vec();
    let mut h2 = c2.to_vec();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return None;
    }

    let order = search_order(g1, c1);
    let mut state = Search {
        g1,
        g2,
        c1,
        c2,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    state.extend(0).then_some(state.map)
}

/// Stable colouring of `g`; colour ids are canonical (ordered by signature).
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                ns.sort_unstable();
                (colors[v], ns)
            })
            .collect();
        let ids: BTreeMap<&(usize, Vec<usize>), usize> = {
            let mut m = BTreeMap::new();
            for s in &sigs {
                m.entry(s).or_insert(0);
            }
            for (i, v) in m.values_mut().enumerate() {
                *v = i;
            }
            m
        };
        let next: Vec<usize> = sigs.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// BFS order starting from the rarest colour, so early choices are tight.
fn search_order(g: &Graph, colors: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut freq = BTreeMap::new();
    for &c in colors {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (freq[&colors[v]], v))
            .unwrap();
        placed[start] = true;
        let mut head = order.len();
        order.push(start);
        while head < order.len() {
            let u = order[head];
            head += 1;
            let mut next: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| (freq[&colors[w]], w));
            for w in next {
                placed[w] = true;
                order.push(w);
            }
        }
    }
    order
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    c1: &'a [usize],
    c2: &'a [usize],
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let u = self.order[depth];
        // Candidates: neighbours of an already-mapped neighbour's image, if any.
        let anchor = self.g1.neighbors(u).iter().find(|&&w| self.map[w] != usize::MAX);
        let candidates: Vec<usize> = match anchor {
            Some(&w) => self.g2.neighbors(self.map[w]).to_vec(),
            None => (0..self.g2.n()).collect(),
        };
        for x in candidates {
            if self.used[x] || self.c1[u] != self.c2[x] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&w| self.g1.has_edge(u, w) == self.g2.has_edge(x, self.map[w]));
            if !consistent {
                continue;
            }
            self.map[u] = x;
            self.used[x] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[u] = usize::MAX;
            self.used[x] = false;
        }
        false
    }
}
