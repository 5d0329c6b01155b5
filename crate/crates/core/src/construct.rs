//! Graph constructions: products, `psi_T`, `phi`, degree splitting and the
//! named catalogue.
//!
//! Index conventions (stable, relied on by tests and the CLI):
//! * Cartesian and tensor products: pair `(w, v)` is vertex `w * n2 + v`,
//!   where `n2` is the order of the second factor.
//! * `psi_T(G)`: vertices are the homomorphisms `T -> G` in lexicographic
//!   order of the tuple `(x(0), x(1), ...)`.
//! * `phi(H)`: copy 0 of `v` is `v`, copy 1 is `n + v`.
//! * `k55_minus_c10`: sides `a_i = i`, `b_i = 5 + i`; the removed Hamilton
//!   cycle is `a0 b0 a1 b1 a2 b2 a3 b3 a4 b4 a0`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::graph::Graph;
use crate::hom::{all_homs, count_hom};
use crate::rational::{ceil, Rational};

/// Default cap on `|V(psi_T(G))|`.
pub const PSI_VERTEX_LIMIT: usize = 4096;

pub const NAMED_KEYS: &[&str] = &[
    "path",
    "cycle",
    "star",
    "complete",
    "complete_bipartite",
    "grid",
    "hypercube",
    "k55_minus_c10",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("|Hom(T, G)| = {count} exceeds the limit of {limit} vertices")]
    TooLarge { count: BigUint, limit: usize },
    #[error("the tree factor must have at least one vertex")]
    EmptyFactor,
    #[error("mapping has length {found}, expected {expected}")]
    MappingLength { expected: usize, found: usize },
    #[error("mapping is not a homomorphism: edge ({0}, {1}) is not preserved")]
    NotAHomomorphism(usize, usize),
    #[error("image {0} is out of range")]
    ImageOutOfRange(usize),
    #[error("degree splitting needs at least one edge")]
    NoEdges,
    #[error("unknown graph name {0:?}")]
    UnknownKey(String),
    #[error("bad parameters for {key}: {reason}")]
    BadParams { key: String, reason: String },
}

/// A product graph together with its factor orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIndexedGraph {
    pub graph: Graph,
    pub left: usize,
    pub right: usize,
}

impl PairIndexedGraph {
    pub fn index(&self, w: usize, v: usize) -> usize {
        w * self.right + v
    }

    pub fn pair(&self, idx: usize) -> (usize, usize) {
        (idx / self.right, idx % self.right)
    }
}

/// `h1 □ h2`: pairs adjacent when equal in one coordinate and adjacent in
/// the other.
pub fn cartesian_product(h1: &Graph, h2: &Graph) -> PairIndexedGraph {
    let (n1, n2) = (h1.n(), h2.n());
    let mut edges = Vec::with_capacity(n1 * h2.edge_count() + n2 * h1.edge_count());
    for w in 0..n1 {
        for (a, b) in h2.edges() {
            edges.push((w * n2 + a, w * n2 + b));
        }
    }
    for (a, b) in h1.edges() {
        for v in 0..n2 {
            edges.push((a * n2 + v, b * n2 + v));
        }
    }
    PairIndexedGraph {
        graph: Graph::from_edges(n1 * n2, edges).expect("product edges are in range"),
        left: n1,
        right: n2,
    }
}

/// `g1 ⊗ g2`: pairs adjacent when adjacent in both coordinates.
/// Vertex `(u1, u2)` is `u1 * |V(g2)| + u2`.
pub fn tensor_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.n();
    let mut edges = Vec::with_capacity(2 * g1.edge_count() * g2.edge_count());
    for (a, b) in g1.edges() {
        for (c, d) in g2.edges() {
            edges.push((a * n2 + c, b * n2 + d));
            edges.push((a * n2 + d, b * n2 + c));
        }
    }
    Graph::from_edges(g1.n() * n2, edges).expect("product edges are in range")
}

/// `psi_T(G)` with its vertex table.
#[derive(Debug, Clone)]
pub struct HomIndexedGraph {
    pub graph: Graph,
    /// `homs[i]` is the homomorphism `T -> G` behind vertex `i`.
    pub homs: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl HomIndexedGraph {
    pub fn vertex_of(&self, hom: &[usize]) -> Option<usize> {
        self.index.get(hom).copied()
    }
}

/// Graph on `Hom(T, G)` where `h1 ~ h2` iff `h1(w) ~ h2(w)` in `G` for every
/// `w ∈ V(T)`.
pub fn psi(t: &Graph, g: &Graph, limit: usize) -> Result<HomIndexedGraph, ConstructError> {
    if t.n() == 0 {
        return Err(ConstructError::EmptyFactor);
    }
    let count = count_hom(t, g);
    if count.to_usize().is_none_or(|c| c > limit) {
        return Err(ConstructError::TooLarge { count, limit });
    }
    let homs = all_homs(t, g);
    let index: HashMap<Vec<usize>, usize> = homs.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
    let graph = Graph::from_fn(homs.len(), |i, j| {
        homs[i].iter().zip(&homs[j]).all(|(&x, &y)| g.has_edge(x, y))
    });
    Ok(HomIndexedGraph { graph, homs, index })
}

fn check_hom(h: &Graph, g: &Graph, map: &[usize]) -> Result<(), ConstructError> {
    if map.len() != h.n() {
        return Err(ConstructError::MappingLength {
            expected: h.n(),
            found: map.len(),
        });
    }
    if let Some(&x) = map.iter().find(|&&x| x >= g.n()) {
        return Err(ConstructError::ImageOutOfRange(x));
    }
    match h.edges().find(|&(u, v)| !g.has_edge(map[u], map[v])) {
        Some((u, v)) => Err(ConstructError::NotAHomomorphism(u, v)),
        None => Ok(()),
    }
}

/// Sends `f ∈ Hom(T □ H, G)` to `v ↦ f(·, v) ∈ Hom(H, psi_T(G))`.
///
/// `hom` is indexed by the product index `w * |V(H)| + v`; the result holds
/// `psi` vertex indices.
pub fn lift_hom(
    psi: &HomIndexedGraph,
    t: &Graph,
    h: &Graph,
    g: &Graph,
    hom: &[usize],
) -> Result<Vec<usize>, ConstructError> {
    let product = cartesian_product(t, h);
    check_hom(&product.graph, g, hom)?;
    let lifted = (0..h.n())
        .map(|v| {
            let fiber: Vec<usize> = (0..t.n()).map(|w| hom[product.index(w, v)]).collect();
            psi.vertex_of(&fiber).expect("every fibre of a product hom is a hom of T")
        })
        .collect();
    Ok(lifted)
}

/// Sends `F ∈ Hom(H, psi_T(G))` to `(w, v) ↦ F(v)(w) ∈ Hom(T □ H, G)`.
pub fn project_hom(psi: &HomIndexedGraph, t: &Graph, h: &Graph, hom: &[usize]) -> Result<Vec<usize>, ConstructError> {
    check_hom(h, &psi.graph, hom)?;
    let nh = h.n();
    let mut out = vec![0; t.n() * nh];
    for (v, &p) in hom.iter().enumerate() {
        for (w, &x) in psi.homs[p].iter().enumerate() {
            out[w * nh + v] = x;
        }
    }
    Ok(out)
}

/// Bipartite double of `h`: copies of `v` are joined, and copies of
/// adjacent vertices are joined across the two sides.
pub fn phi(h: &Graph) -> Graph {
    let n = h.n();
    let edges = (0..n)
        .map(|v| (v, n + v))
        .chain(h.edges().flat_map(|(u, v)| [(u, n + v), (v, n + u)]));
    Graph::from_edges(2 * n, edges).expect("phi edges are in range")
}

/// Output of [`degree_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSplit {
    pub graph: Graph,
    /// `origin[i]` is the vertex of the input that copy `i` replaces.
    pub origin: Vec<usize>,
    /// Average degree `2|E| / |V|` of the input.
    pub average_degree: Rational,
}

/// Replaces each vertex `v` by `t_v` copies that share out its neighbours.
///
/// With `Δ = 2|E|/|V|` kept exact, `t_v = min(⌈deg(v)/Δ⌉, deg(v))`: the
/// ceiling rule, except that no copy is left without neighbours when
/// `Δ < 1`. The sorted neighbour list of `v` is cut into `t_v` consecutive
/// shares whose sizes differ by at most one, larger shares first, so every
/// share has at most `⌈deg(v)/t_v⌉ <= ⌈Δ⌉` members. Each edge `vw` becomes
/// the single edge between the copy of `v` holding `w` and the copy of `w`
/// holding `v`. Copies are numbered by original vertex, then share.
/// Isolated vertices get no copies.
pub fn degree_split(g: &Graph) -> Result<DegreeSplit, ConstructError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(ConstructError::NoEdges);
    }
    let avg = Rational::new((2 * m).into(), g.n().into());
    let mut first_copy = vec![0usize; g.n()];
    let mut share_of: Vec<HashMap<usize, usize>> = vec![HashMap::new(); g.n()];
    let mut origin = Vec::new();
    for v in 0..g.n() {
        let d = g.degree(v);
        first_copy[v] = origin.len();
        if d == 0 {
            continue;
        }
        let by_ceiling = ceil(&(Rational::from_integer(d.into()) / &avg))
            .to_usize()
            .expect("copy count fits usize");
        let t = by_ceiling.min(d);
        let (base, extra) = (d / t, d % t);
        let mut nbrs = g.neighbors(v).iter();
        for share in 0..t {
            let size = base + usize::from(share < extra);
            for &w in nbrs.by_ref().take(size) {
                share_of[v].insert(w, share);
            }
            origin.push(v);
        }
    }
    let edges = g
        .edges()
        .map(|(v, w)| (first_copy[v] + share_of[v][&w], first_copy[w] + share_of[w][&v]));
    let graph = Graph::from_edges(origin.len(), edges).expect("split edges are in range");
    Ok(DegreeSplit {
        graph,
        origin,
        average_degree: avg,
    })
}

fn bad(key: &str, reason: impl Into<String>) -> ConstructError {
    ConstructError::BadParams {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn expect_params<const N: usize>(key: &str, params: &[usize]) -> Result<[usize; N], ConstructError> {
    params
        .try_into()
        .map_err(|_| bad(key, format!("expected {N} parameter(s), got {}", params.len())))
}

/// Path on `n` vertices (`path 2` is `K_2`).
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are in range")
}

pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    Graph::from_fn(m + n, |u, v| u < m && v >= m)
}

/// Catalogue lookup.
///
/// | key | params | graph |
/// |---|---|---|
/// | `path` | `n >= 1` | path on `n` vertices |
/// | `cycle` | `n >= 3` | `C_n` |
/// | `star` | `k >= 0` | `K_{1,k}`, centre `0` |
/// | `complete` | `n >= 1` | `K_n` |
/// | `complete_bipartite` | `m, n >= 1` | `K_{m,n}`, sides `0..m`, `m..m+n` |
/// | `grid` | `d1, .., dk >= 1` | `P_{d1} □ ... □ P_{dk}` |
/// | `hypercube` | `d >= 0` | `K_2^{□d}` |
/// | `k55_minus_c10` | none | `K_{5,5}` minus a Hamilton cycle |
pub fn named(key: &str, params: &[usize]) -> Result<Graph, ConstructError> {
    match key {
        "path" => {
            let [n] = expect_params(key, params)?;
            if n == 0 {
                return Err(bad(key, "needs at least one vertex"));
            }
            Ok(path(n))
        }
        "cycle" => {
            let [n] = expect_params(key, params)?;
            if n < 3 {
                return Err(bad(key, "needs at least three vertices"));
            }
            Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are in range"))
        }
        "star" => {
            let [k] = expect_params(key, params)?;
            Ok(Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).expect("star edges are in range"))
        }
        "complete" => {
            let [n] = expect_params(key, params)?;
            if n == 0 {
                return Err(bad(key, "needs at least one vertex"));
            }
            Ok(Graph::from_fn(n, |_, _| true))
        }
        "complete_bipartite" => {
            let [m, n] = expect_params(key, params)?;
            if m == 0 || n == 0 {
                return Err(bad(key, "both sides need a vertex"));
            }
            Ok(complete_bipartite(m, n))
        }
        "grid" => {
            if params.is_empty() || params.contains(&0) {
                return Err(bad(key, "needs one or more positive side lengths"));
            }
            Ok(params[1..]
                .iter()
                .fold(path(params[0]), |acc, &d| cartesian_product(&acc, &path(d)).graph))
        }
        "hypercube" => {
            let [d] = expect_params(key, params)?;
            if d > 16 {
                return Err(bad(key, "dimension above 16"));
            }
            let k2 = path(2);
            Ok((0..d).fold(path(1), |acc, _| cartesian_product(&acc, &k2).graph))
        }
        "k55_minus_c10" => {
            let [] = expect_params(key, params)?;
            Ok(Graph::from_fn(10, |u, v| {
                // u < v, so u = a_i and v = b_j on a cross pair
                u < 5 && v >= 5 && {
                    let (i, j) = (u, v - 5);
                    j != i && j != (i + 4) % 5
                }
            }))
        }
        other => Err(ConstructError::UnknownKey(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::count_hom_bruteforce;
    use crate::iso::is_isomorphic;

    #[test]
    fn k2_box_k2_is_c4() {
        let k2 = path(2);
        let p = cartesian_product(&k2, &k2);
        assert!(is_isomorphic(&p.graph, &named("cycle", &[4]).unwrap()));
        assert_eq!(p.index(1, 0), 2);
        assert_eq!(p.pair(3), (1, 1));
    }

    #[test]
    fn product_edge_counts() {
        let h = named("cycle", &[5]).unwrap();
        let k2h = cartesian_product(&path(2), &h).graph;
        assert_eq!(k2h.edge_count(), 2 * 5 + 5);
        let t = named("star", &[3]).unwrap();
        let th = cartesian_product(&t, &h).graph;
        assert_eq!(th.edge_count(), 3 * 5 + 4 * 5);
    }

    #[test]
    fn tensor_goldens() {
        let k2 = path(2);
        let m = tensor_product(&k2, &k2);
        assert_eq!(m, Graph::from_edges(4, [(0, 3), (1, 2)]).unwrap());
        let g = named("cycle", &[5]).unwrap();
        assert_eq!(tensor_product(&g, &path(1)), Graph::empty(5));
    }

    #[test]
    fn psi_goldens() {
        let k2 = path(2);
        let k3 = named("complete", &[3]).unwrap();
        let p = psi(&k2, &k3, PSI_VERTEX_LIMIT).unwrap();
        assert_eq!(p.graph.n(), 6);
        assert_eq!(p.homs[0], vec![0, 1]);
        assert_eq!(count_hom_bruteforce(&k2, &p.graph).unwrap(), BigUint::from(18u8));

        let g = named("cycle", &[5]).unwrap();
        let p1 = psi(&path(1), &g, PSI_VERTEX_LIMIT).unwrap();
        assert_eq!(p1.graph, g);
        assert_eq!(psi(&k2, &g, PSI_VERTEX_LIMIT).unwrap().graph.n(), 10);

        assert!(matches!(psi(&k2, &k3, 5), Err(ConstructError::TooLarge { .. })));
        assert_eq!(psi(&Graph::empty(0), &k3, 5).unwrap_err(), ConstructError::EmptyFactor);
    }

    #[test]
    fn lift_and_project() {
        let k2 = path(2);
        let k3 = named("complete", &[3]).unwrap();
        let p = psi(&k2, &k3, PSI_VERTEX_LIMIT).unwrap();
        let prod = cartesian_product(&k2, &k2).graph;
        let homs = all_homs(&prod, &k3);
        assert_eq!(homs.len(), 18);
        let mut seen = std::collections::BTreeSet::new();
        for f in &homs {
            let lifted = lift_hom(&p, &k2, &k2, &k3, f).unwrap();
            assert!(p.graph.has_edge(lifted[0], lifted[1]));
            assert_eq!(&project_hom(&p, &k2, &k2, &lifted).unwrap(), f);
            seen.insert(lifted);
        }
        assert_eq!(seen.len(), 18);
        assert_eq!(
            lift_hom(&p, &k2, &k2, &k3, &[0, 0, 1, 2]),
            Err(ConstructError::NotAHomomorphism(0, 1))
        );
        assert!(project_hom(&p, &k2, &k2, &[0, 0]).is_err());
    }

    #[test]
    fn phi_goldens() {
        for k in 1..=4 {
            let f = phi(&named("complete", &[k]).unwrap());
            assert!(is_isomorphic(&f, &complete_bipartite(k, k)));
        }
        let c5 = named("cycle", &[5]).unwrap();
        let f = phi(&c5);
        assert_eq!(f.edge_count(), 15);
        assert!(is_isomorphic(&f, &named("k55_minus_c10", &[]).unwrap()));
        let c4 = named("cycle", &[4]).unwrap();
        assert!(is_isomorphic(&phi(&c4), &cartesian_product(&path(2), &c4).graph));
    }

    #[test]
    fn split_star() {
        let star = named("star", &[4]).unwrap();
        let s = degree_split(&star).unwrap();
        assert_eq!(s.average_degree, Rational::new(8.into(), 5.into()));
        assert_eq!(s.graph.n(), 7);
        assert_eq!(s.graph.edge_count(), 4);
        assert_eq!(s.origin, vec![0, 0, 0, 1, 2, 3, 4]);
        let shares: Vec<usize> = (0..3).map(|i| s.graph.degree(i)).collect();
        assert_eq!(shares, vec![2, 1, 1]);
    }

    #[test]
    fn split_regular_is_identity() {
        let c = named("cycle", &[6]).unwrap();
        let s = degree_split(&c).unwrap();
        assert_eq!(s.graph, c);
        assert_eq!(degree_split(&Graph::empty(3)).unwrap_err(), ConstructError::NoEdges);
    }

    #[test]
    fn catalogue() {
        let q3 = named("hypercube", &[3]).unwrap();
        assert_eq!((q3.n(), q3.edge_count()), (8, 12));
        assert!(is_isomorphic(&q3, &named("grid", &[2, 2, 2]).unwrap()));
        let k = named("k55_minus_c10", &[]).unwrap();
        assert!((0..10).all(|v| k.degree(v) == 3));
        assert!(is_isomorphic(&named("cycle", &[4]).unwrap(), &named("complete_bipartite", &[2, 2]).unwrap()));
        assert_eq!(named("hypercube", &[0]).unwrap().n(), 1);
        assert!(matches!(named("wheel", &[5]), Err(ConstructError::UnknownKey(_))));
        assert!(matches!(named("cycle", &[2]), Err(ConstructError::BadParams { .. })));
        assert!(matches!(named("path", &[1, 2]), Err(ConstructError::BadParams { .. })));
    }
}
