//! Exact inequality checks, corpus runs and classification.
//!
//! The inequality `t_H(G) >= t_{K2}(G)^m` with `m = |E(H)|`, `k = |V(H)|`
//! and `n = |V(G)|` is decided in integers as
//! `|Hom(H, G)| · n^(2m - k) >= (2|E(G)|)^m`, after isolated vertices of `H`
//! are dropped (which leaves `t_H` unchanged and makes `2m >= k`).

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::pow;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrange::{check_arrangement, decide_tree_arrangeable, labeled_trees, ArrangeError, NeighborhoodFamily, TreeEdges};
use crate::construct::{cartesian_product, complete_bipartite, named};
use crate::graph::{bipartitions, remove_isolated, BipartiteStructure, Graph};
use crate::graph6::{parse_graph6, parse_graph6_lines, write_graph6};
use crate::hom::count_hom;
use crate::iso::{find_isomorphism, is_isomorphic};
use crate::random::gnp_ensemble;
use crate::rational::{format_rational, BigCount, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("H is not bipartite (odd cycle {0:?})")]
    NotBipartite(Vec<usize>),
    #[error("H has no edges")]
    NoEdges,
    #[error("G has no vertices")]
    EmptyTarget,
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("bad source: {0}")]
    Source(String),
    #[error(transparent)]
    Arrange(#[from] ArrangeError),
}

/// Outcome of one exact comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityVerdict {
    pub holds: bool,
    pub lhs: BigCount,
    pub rhs: BigCount,
    /// `t_H(G) - t_{K2}(G)^|E(H)|`.
    pub margin: Rational,
    pub hom_count: BigCount,
    /// Isolated vertices dropped from `H` before counting.
    pub isolated_removed: usize,
}

/// Decides `t_H(G) >= t_{K2}(G)^|E(H)|` exactly.
pub fn sidorenko_check(h: &Graph, g: &Graph) -> Result<InequalityVerdict, VerifyError> {
    if let BipartiteStructure::OddCycle(c) = bipartitions(h) {
        return Err(VerifyError::NotBipartite(c));
    }
    if h.edge_count() == 0 {
        return Err(VerifyError::NoEdges);
    }
    if g.n() == 0 {
        return Err(VerifyError::EmptyTarget);
    }
    let original = h.n();
    let reduced = remove_isolated(h);
    let h = &reduced.graph;
    let (k, m) = (h.n(), h.edge_count());
    let n = BigUint::from(g.n());
    let hom_count = count_hom(h, g);
    let edges2 = BigUint::from(2 * g.edge_count());
    let power = pow(edges2.clone(), m);
    let (lhs, rhs) = if 2 * m >= k {
        (&hom_count * pow(n.clone(), 2 * m - k), power)
    } else {
        (hom_count.clone(), power * pow(n.clone(), k - 2 * m))
    };
    let t_h = Rational::new(BigInt::from(hom_count.clone()), BigInt::from(pow(n.clone(), k)));
    let t_k2 = Rational::new(BigInt::from(edges2), BigInt::from(&n * &n));
    let margin = t_h - pow(t_k2, m);
    Ok(InequalityVerdict {
        holds: lhs >= rhs,
        lhs,
        rhs,
        margin,
        hom_count,
        isolated_removed: original - k,
    })
}

/// A graph (or the reason it could not be read) with a stable identifier.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub id: String,
    pub graph: Result<Graph, String>,
}

/// Where a side of a corpus run comes from.
#[derive(Debug, Clone)]
pub enum Source {
    /// One graph6 string per line; ids are `<path>:<line>`.
    Graph6File(PathBuf),
    Named { key: String, params: Vec<usize> },
    /// `count` members of `G(n, p)` with seeds `seed, seed + 1, ...`.
    Random { n: usize, p: Rational, seed: u64, count: usize },
    Items(Vec<CorpusItem>),
}

/// Expands a source into items. Unreadable files fail the whole source;
/// malformed lines become error items.
pub fn load_source(source: &Source) -> Result<Vec<CorpusItem>, VerifyError> {
    match source {
        Source::Graph6File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            Ok(parse_graph6_lines(&text)
                .into_iter()
                .map(|l| CorpusItem {
                    id: format!("{}:{}", path.display(), l.line),
                    graph: l.result.map_err(|e| e.to_string()),
                })
                .collect())
        }
        Source::Named { key, params } => {
            let id = std::iter::once(format!("named:{key}"))
                .chain(params.iter().map(usize::to_string))
                .collect::<Vec<_>>()
                .join(":");
            Ok(vec![CorpusItem {
                id,
                graph: named(key, params).map_err(|e| e.to_string()),
            }])
        }
        Source::Random { n, p, seed, count } => {
            let graphs = gnp_ensemble(*n, p, *seed, *count).map_err(|e| VerifyError::Source(e.to_string()))?;
            Ok(graphs
                .into_iter()
                .enumerate()
                .map(|(i, g)| CorpusItem {
                    id: format!("gnp:{n}:{}:{}", format_rational(p), seed.wrapping_add(i as u64)),
                    graph: Ok(g),
                })
                .collect())
        }
        Source::Items(items) => Ok(items.clone()),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> VerifyError {
    VerifyError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Reads a file holding exactly one graph6 line.
pub fn read_single_graph6(path: &Path) -> Result<Graph, VerifyError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut lines = parse_graph6_lines(&text).into_iter();
    match (lines.next(), lines.next()) {
        (Some(line), None) => line
            .result
            .map_err(|e| VerifyError::Source(format!("{}:{}: {e}", path.display(), line.line))),
        (None, _) => Err(VerifyError::Source(format!("{} holds no graph", path.display()))),
        (Some(_), Some(_)) => Err(VerifyError::Source(format!("{} holds more than one graph", path.display()))),
    }
}

/// Parses a single graph6 literal.
pub fn graph_from_literal(text: &str) -> Result<Graph, VerifyError> {
    parse_graph6(text).map_err(|e| VerifyError::Source(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub count_us: u64,
}

/// One JSON line of a corpus run. Either the verdict fields or `error` are set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub h_id: String,
    pub g_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub isolated_removed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl Record {
    fn failed(h_id: &str, g_id: &str, error: String) -> Self {
        Record {
            h_id: h_id.to_string(),
            g_id: g_id.to_string(),
            holds: None,
            lhs: None,
            rhs: None,
            margin: None,
            timings: None,
            isolated_removed: 0,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRef {
    pub h_id: String,
    pub g_id: String,
    pub margin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: usize,
    pub evaluated: usize,
    pub holds: usize,
    pub errors: usize,
    pub violations: Vec<PairRef>,
    /// Smallest margin seen, with its pair (earliest on ties).
    pub min_margin: Option<PairRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    /// When false, `timings` is reported as zero so output is reproducible
    /// byte for byte.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            timings: true,
        }
    }
}

fn evaluate(h: &CorpusItem, g: &CorpusItem, timings: bool) -> Record {
    let hg = match &h.graph {
        Ok(x) => x,
        Err(e) => return Record::failed(&h.id, &g.id, format!("H: {e}")),
    };
    let gg = match &g.graph {
        Ok(x) => x,
        Err(e) => return Record::failed(&h.id, &g.id, format!("G: {e}")),
    };
    let start = Instant::now();
    match sidorenko_check(hg, gg) {
        Ok(v) => Record {
            h_id: h.id.clone(),
            g_id: g.id.clone(),
            holds: Some(v.holds),
            lhs: Some(v.lhs.to_string()),
            rhs: Some(v.rhs.to_string()),
            margin: Some(format_rational(&v.margin)),
            timings: Some(Timings {
                count_us: if timings { start.elapsed().as_micros() as u64 } else { 0 },
            }),
            isolated_removed: v.isolated_removed,
            error: None,
        },
        Err(e) => Record::failed(&h.id, &g.id, e.to_string()),
    }
}

const BATCH_PER_WORKER: usize = 16;

/// Checks every `(H, G)` pair, `H` outermost, handing records to `sink` in
/// that order whatever the worker count.
pub fn corpus_run(hs: &[CorpusItem], gs: &[CorpusItem], options: RunOptions, mut sink: impl FnMut(&Record)) -> Summary {
    let workers = options.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let pairs: Vec<(usize, usize)> = (0..hs.len()).flat_map(|i| (0..gs.len()).map(move |j| (i, j))).collect();
    let mut summary = Summary {
        pairs: pairs.len(),
        ..Summary::default()
    };
    let mut min: Option<(Rational, PairRef)> = None;
    for batch in pairs.chunks(workers * BATCH_PER_WORKER) {
        let records: Vec<Record> =
            pool.install(|| batch.par_iter().map(|&(i, j)| evaluate(&hs[i], &gs[j], options.timings)).collect());
        for r in &records {
            sink(r);
            let (Some(holds), Some(margin)) = (r.holds, &r.margin) else {
                summary.errors += 1;
                continue;
            };
            summary.evaluated += 1;
            let pair = PairRef {
                h_id: r.h_id.clone(),
                g_id: r.g_id.clone(),
                margin: margin.clone(),
            };
            if holds {
                summary.holds += 1;
            } else {
                summary.violations.push(pair.clone());
            }
            let value = crate::rational::parse_rational(margin).expect("margin was formatted here");
            if min.as_ref().is_none_or(|(m, _)| value < *m) {
                min = Some((value, pair));
            }
        }
    }
    summary.min_margin = min.map(|(_, p)| p);
    summary
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    TreeArrangeable,
    ClosureDerived,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogFamily {
    Tree,
    EvenCycle,
    CompleteBipartite,
    Hypercube,
}

/// One rule application. A derivation is a chain of `Cartesian` steps
/// ending in `TreeArrangeable` or `Catalog`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Step {
    /// The current graph has this arrangement.
    TreeArrangeable { side_a: Vec<usize>, tree: TreeEdges },
    /// The current graph belongs to a base family.
    Catalog { family: CatalogFamily, params: Vec<usize> },
    /// The current graph is `T □ F`; `isomorphism[i]` is the image of
    /// product vertex `i` (index `w * |V(F)| + v`). `F` becomes current.
    Cartesian {
        tree_order: usize,
        tree: TreeEdges,
        factor: String,
        isomorphism: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub id: String,
    pub status: Status,
    /// Isolated vertices dropped before classification.
    pub isolated_removed: usize,
    pub derivation: Vec<Step>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Largest tree factor tried.
    pub max_tree_order: usize,
    /// Largest number of vertex subsets examined per factor size.
    pub max_subsets: u128,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_tree_order: 6,
            max_subsets: 1 << 20,
        }
    }
}

/// Classification with default options.
pub fn classify(id: &str, h: &Graph) -> Result<ClassificationRecord, VerifyError> {
    classify_with(id, h, ClassifyOptions::default())
}

pub fn classify_with(id: &str, h: &Graph, options: ClassifyOptions) -> Result<ClassificationRecord, VerifyError> {
    if let BipartiteStructure::OddCycle(c) = bipartitions(h) {
        return Err(VerifyError::NotBipartite(c));
    }
    let reduced = remove_isolated(h);
    let trees = tree_shapes(options.max_tree_order);
    let derivation = derive(&reduced.graph, &trees, options)?;
    let status = status_of(&derivation);
    Ok(ClassificationRecord {
        id: id.to_string(),
        status,
        isolated_removed: h.n() - reduced.graph.n(),
        derivation: derivation.unwrap_or_default(),
    })
}

fn status_of(derivation: &Option<Vec<Step>>) -> Status {
    match derivation.as_deref() {
        None => Status::Unknown,
        Some([Step::TreeArrangeable { .. }]) => Status::TreeArrangeable,
        Some(_) => Status::ClosureDerived,
    }
}

/// One tree per isomorphism class on `2..=max` vertices, labelled `0..τ`.
fn tree_shapes(max: usize) -> Vec<Graph> {
    let mut shapes: Vec<Graph> = Vec::new();
    for order in 2..=max {
        let vertices: Vec<usize> = (0..order).collect();
        for edges in labeled_trees(&vertices) {
            let t = Graph::from_edges(order, edges).expect("tree edges are in range");
            if !shapes.iter().any(|s| s.n() == order && is_isomorphic(s, &t)) {
                shapes.push(t);
            }
        }
    }
    shapes
}

fn derive(h: &Graph, trees: &[Graph], options: ClassifyOptions) -> Result<Option<Vec<Step>>, VerifyError> {
    let cert = decide_tree_arrangeable(h)?;
    if cert.is_arrangeable() {
        return Ok(Some(vec![Step::TreeArrangeable {
            side_a: cert.bipartition.expect("arrangeable certificate").side_a,
            tree: cert.tree.expect("arrangeable certificate"),
        }]));
    }
    if let Some((family, params)) = catalog_match(h) {
        return Ok(Some(vec![Step::Catalog { family, params }]));
    }
    let (big_n, big_e) = (h.n(), h.edge_count());
    for t in trees {
        let tau = t.n();
        if big_n % tau != 0 || big_n / tau < 2 {
            continue;
        }
        let k = big_n / tau;
        let spanning = (tau - 1) * k;
        if big_e < spanning || (big_e - spanning) % tau != 0 {
            continue;
        }
        let factor_edges = (big_e - spanning) / tau;
        for factor in factor_candidates(h, k, factor_edges, options.max_subsets) {
            let product = cartesian_product(t, &factor).graph;
            let Some(iso) = find_isomorphism(&product, h) else {
                continue;
            };
            if let Some(rest) = derive(&factor, trees, options)? {
                let mut steps = vec![Step::Cartesian {
                    tree_order: tau,
                    tree: t.edges().collect(),
                    factor: write_graph6(&factor).expect("small factor"),
                    isomorphism: iso,
                }];
                steps.extend(rest);
                return Ok(Some(steps));
            }
        }
    }
    Ok(None)
}

/// Pairwise non-isomorphic induced subgraphs on `k` vertices with `edges`
/// edges, connected whenever `h` is. Empty if there are too many subsets.
fn factor_candidates(h: &Graph, k: usize, edges: usize, max_subsets: u128) -> Vec<Graph> {
    if binomial(h.n(), k) > max_subsets {
        return Vec::new();
    }
    let connected = h.is_connected();
    let mut out: Vec<Graph> = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let sub = h.induced_subgraph(&subset);
        if sub.edge_count() == edges && (!connected || sub.is_connected()) && !out.iter().any(|c| is_isomorphic(c, &sub)) {
            out.push(sub);
        }
        if !next_subset(&mut subset, h.n()) {
            return out;
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn catalog_match(h: &Graph) -> Option<(CatalogFamily, Vec<usize>)> {
    let (n, e) = (h.n(), h.edge_count());
    if n == 0 || !h.is_connected() {
        return None;
    }
    if e + 1 == n {
        return Some((CatalogFamily::Tree, vec![n]));
    }
    if n >= 4 && n % 2 == 0 && (0..n).all(|v| h.degree(v) == 2) {
        return Some((CatalogFamily::EvenCycle, vec![n]));
    }
    if let BipartiteStructure::Bipartite(c) = bipartitions(h) {
        let (a, b) = (c.components[0].color0.len(), c.components[0].color1.len());
        if a * b == e {
            return Some((CatalogFamily::CompleteBipartite, vec![a.min(b), a.max(b)]));
        }
    }
    let d = h.degree(0);
    if n == 1 << d && d <= 16 && is_isomorphic(h, &named("hypercube", &[d]).expect("d <= 16")) {
        return Some((CatalogFamily::Hypercube, vec![d]));
    }
    None
}

fn catalog_holds(h: &Graph, family: CatalogFamily, params: &[usize]) -> bool {
    let (n, e) = (h.n(), h.edge_count());
    match (family, params) {
        (CatalogFamily::Tree, &[k]) => k == n && e + 1 == n && h.is_connected(),
        (CatalogFamily::EvenCycle, &[k]) => {
            k == n && n >= 4 && n % 2 == 0 && h.is_connected() && (0..n).all(|v| h.degree(v) == 2)
        }
        (CatalogFamily::CompleteBipartite, &[a, b]) => a > 0 && b > 0 && is_isomorphic(h, &complete_bipartite(a, b)),
        (CatalogFamily::Hypercube, &[d]) => named("hypercube", &[d]).is_ok_and(|q| is_isomorphic(h, &q)),
        _ => false,
    }
}

/// Re-applies a record's derivation to `h` and returns the status it
/// supports; a step that does not check out yields `Unknown`.
pub fn replay(h: &Graph, record: &ClassificationRecord) -> Status {
    let mut current = remove_isolated(h).graph;
    for (i, step) in record.derivation.iter().enumerate() {
        let last = i + 1 == record.derivation.len();
        match step {
            Step::TreeArrangeable { side_a, tree } => {
                let ok = last
                    && NeighborhoodFamily::from_graph(&current, side_a)
                        .and_then(|fam| check_arrangement(&fam, tree))
                        .is_ok_and(|c| c.holds)
                    && current
                        .edges()
                        .all(|(u, v)| side_a.contains(&u) || side_a.contains(&v));
                return if !ok {
                    Status::Unknown
                } else if i == 0 {
                    Status::TreeArrangeable
                } else {
                    Status::ClosureDerived
                };
            }
            Step::Catalog { family, params } => {
                return if last && catalog_holds(&current, *family, params) {
                    Status::ClosureDerived
                } else {
                    Status::Unknown
                };
            }
            Step::Cartesian {
                tree_order,
                tree,
                factor,
                isomorphism,
            } => {
                let Ok(t) = Graph::from_edges(*tree_order, tree.iter().copied()) else {
                    return Status::Unknown;
                };
                let Ok(f) = parse_graph6(factor) else {
                    return Status::Unknown;
                };
                if last || t.edge_count() + 1 != t.n() || !t.is_connected() || f.n() == 0 {
                    return Status::Unknown;
                }
                let product = cartesian_product(&t, &f).graph;
                if !is_isomorphism(&product, &current, isomorphism) {
                    return Status::Unknown;
                }
                current = f;
            }
        }
    }
    Status::Unknown
}

fn is_isomorphism(g1: &Graph, g2: &Graph, map: &[usize]) -> bool {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() || map.len() != g1.n() {
        return false;
    }
    let mut hit = vec![false; g2.n()];
    for &x in map {
        if x >= g2.n() || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    g1.edges().all(|(u, v)| g2.has_edge(map[u], map[v]))
}
