//! Exact evaluation of the normalised functionals behind the tree-arrangeable
//! inequality, on instances small enough to enumerate every assignment.
//!
//! For a bipartite `H = A ∪ B`, a target `G` without isolated vertices and
//! `ε > 0`:
//!
//! * `ρ(v) = deg(v)/n`, `ρ₀ = 2|E(G)|/n²`;
//! * `f_u = (1(x_u ~ x(Λ_u)) + ε ρ(x_u)^k) / (ρ₀ ρ(x_u)^(k-1))` with `k = |Λ_u|`;
//! * for `u` other than the root, with `S = Λ_u ∩ Λ_parent(u)`,
//!   `E[f_u | Γ(u; T_r)] = (1/n) Σ_y 1(y ~ x(S)) / (ρ₀ ρ(y)^(|S|-1)) + ε`,
//!   and `1 + ε` at the root;
//! * `f_{T_r} = Π_a f_a / E[f_a | Γ(a; T_r)]`.
//!
//! [`check_section2_identities`] enumerates all `n^|V(H)|` assignments and
//! tests root invariance, `E[f_{T_r}] = 1`, and
//! `(1 + ε) E[g f_{T_r}] = E[g f_u]` for every indicator `g` of a pattern of
//! `(x_u, x(Λ_u))`. All comparisons are exact.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrange::{check_arrangement, ArrangeError, NeighborhoodFamily, TreeEdges, Violation};
use crate::graph::Graph;
use crate::rational::{pow, RatString, Rational};

/// Largest `|V(G)|^|V(H)|` that [`check_section2_identities`] enumerates.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("target graph has no vertices")]
    EmptyTarget,
    #[error("vertex {0} of the target graph is isolated")]
    IsolatedVertex(usize),
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("assignment does not cover vertex {0}")]
    Uncovered(usize),
    #[error("assignment sends {vertex} to {image}, outside the target")]
    ImageOutOfRange { vertex: usize, image: usize },
    #[error("vertex {0} is not on side A")]
    NotOnSideA(usize),
    #[error("vertices {0} and {1} outside side A are adjacent")]
    NotABipartition(usize, usize),
    #[error(transparent)]
    Arrange(#[from] ArrangeError),
    #[error("tree is not an arrangement (support of {} is split)", .0.b)]
    NotArrangeable(Violation),
    #[error("{0} assignments exceed the enumeration limit")]
    TooLarge(u128),
}

/// Partial map from vertices of `H` to vertices of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(Vec<Option<usize>>);

impl Assignment {
    pub fn full(images: &[usize]) -> Self {
        Assignment(images.iter().map(|&x| Some(x)).collect())
    }

    pub fn partial(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out = Assignment::default();
        for (v, x) in pairs {
            out.set(v, x);
        }
        out
    }

    pub fn set(&mut self, v: usize, x: usize) {
        if self.0.len() <= v {
            self.0.resize(v + 1, None);
        }
        self.0[v] = Some(x);
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.0.get(v).copied().flatten()
    }

    fn require(&self, v: usize, n: usize) -> Result<usize, ProofError> {
        let x = self.get(v).ok_or(ProofError::Uncovered(v))?;
        if x >= n {
            return Err(ProofError::ImageOutOfRange { vertex: v, image: x });
        }
        Ok(x)
    }
}

/// `deg(v) / n`.
pub fn rho(g: &Graph, v: usize) -> Rational {
    Rational::new(g.degree(v).into(), g.n().into())
}

/// `2|E| / n²`, which equals `t_{K2}(G)`.
pub fn rho0(g: &Graph) -> Rational {
    Rational::new((2 * g.edge_count()).into(), (g.n() * g.n()).into())
}

/// `G` with its degree densities, checked free of isolated vertices.
struct Target<'g> {
    g: &'g Graph,
    rho: Vec<Rational>,
    rho0: Rational,
    eps: Rational,
}

impl<'g> Target<'g> {
    fn new(g: &'g Graph, eps: &Rational) -> Result<Self, ProofError> {
        if g.n() == 0 {
            return Err(ProofError::EmptyTarget);
        }
        if let Some(&v) = g.isolated_vertices().first() {
            return Err(ProofError::IsolatedVertex(v));
        }
        if !eps.is_positive() {
            return Err(ProofError::NonPositiveEps);
        }
        Ok(Target {
            g,
            rho: (0..g.n()).map(|v| rho(g, v)).collect(),
            rho0: rho0(g),
            eps: eps.clone(),
        })
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn adjacent_to_all(&self, y: usize, images: &[usize]) -> bool {
        images.iter().all(|&z| self.g.has_edge(y, z))
    }

    /// `f_u` at `x_u = y` with `x(Λ_u) = images`.
    fn f(&self, y: usize, images: &[usize]) -> Rational {
        let k = images.len() as i64;
        let r = &self.rho[y];
        let indicator = if self.adjacent_to_all(y, images) {
            Rational::one()
        } else {
            Rational::zero()
        };
        (indicator + &self.eps * pow(r, k)) / (&self.rho0 * pow(r, k - 1))
    }

    /// Closed-form conditional expectation given `x(S) = images`.
    fn conditional(&self, images: &[usize]) -> Rational {
        let s = images.len() as i64;
        let mut sum = Rational::zero();
        for y in 0..self.n() {
            if self.adjacent_to_all(y, images) {
                sum += pow(&self.rho[y], 1 - s);
            }
        }
        sum / (&self.rho0 * Rational::from_integer(self.n().into())) + &self.eps
    }
}

/// A tree on side `A` with a chosen root and the induced parent map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedArrangement {
    pub fam: NeighborhoodFamily,
    pub tree: TreeEdges,
    pub root: usize,
    pub parent: BTreeMap<usize, usize>,
}

impl RootedArrangement {
    /// Roots `tree` at `root`; the tree must pass [`check_arrangement`].
    pub fn new(fam: NeighborhoodFamily, tree: TreeEdges, root: usize) -> Result<Self, ProofError> {
        let check = check_arrangement(&fam, &tree)?;
        if let Some(v) = check.violation {
            return Err(ProofError::NotArrangeable(v));
        }
        RootedArrangement::new_unverified(fam, tree, root)
    }

    /// Roots `tree` at `root` checking only that it spans side `A`.
    pub fn new_unverified(fam: NeighborhoodFamily, tree: TreeEdges, root: usize) -> Result<Self, ProofError> {
        check_arrangement(&fam, &tree)?;
        if fam.position(root).is_none() {
            return Err(ProofError::NotOnSideA(root));
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = fam.side_a().iter().map(|&a| (a, Vec::new())).collect();
        for &(u, v) in &tree {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        let mut parent = BTreeMap::new();
        let mut stack = vec![root];
        let mut seen = BTreeSet::from([root]);
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if seen.insert(y) {
                    parent.insert(y, x);
                    stack.push(y);
                }
            }
        }
        Ok(RootedArrangement { fam, tree, root, parent })
    }

    pub fn reroot(&self, root: usize) -> Result<Self, ProofError> {
        RootedArrangement::new_unverified(self.fam.clone(), self.tree.clone(), root)
    }

    /// `Λ_u ∩ Λ_parent(u)`, empty at the root.
    pub fn conditioning_set(&self, u: usize) -> BTreeSet<usize> {
        match self.parent.get(&u) {
            Some(&p) => self.fam.common(u, p),
            None => BTreeSet::new(),
        }
    }

    /// Vertices of the component of `T - u` holding the root.
    pub fn root_component(&self, u: usize) -> Vec<usize> {
        if u == self.root {
            return Vec::new();
        }
        let mut out = vec![self.root];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for (&child, &p) in &self.parent {
                if p == x && child != u {
                    out.push(child);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// `∪_{v ∈ C} (Λ_u ∩ Λ_v)` over the root component `C` of `T - u`.
    pub fn component_union(&self, u: usize) -> BTreeSet<usize> {
        self.root_component(u)
            .into_iter()
            .flat_map(|v| self.fam.common(u, v))
            .collect()
    }
}

fn images_of(x: &Assignment, set: &BTreeSet<usize>, n: usize) -> Result<Vec<usize>, ProofError> {
    set.iter().map(|&b| x.require(b, n)).collect()
}

/// `f_u` at `x`, which must cover `u` and `Λ_u`.
pub fn f_u(fam: &NeighborhoodFamily, g: &Graph, u: usize, x: &Assignment, eps: &Rational) -> Result<Rational, ProofError> {
    let target = Target::new(g, eps)?;
    if fam.position(u).is_none() {
        return Err(ProofError::NotOnSideA(u));
    }
    let y = x.require(u, g.n())?;
    let images = images_of(x, fam.lambda(u), g.n())?;
    Ok(target.f(y, &images))
}

/// `E[f_u | Γ(u; T_r)]`; `x` must cover `Λ_u ∩ Λ_parent(u)`.
pub fn cond_expectation_f(
    ra: &RootedArrangement,
    g: &Graph,
    u: usize,
    x: &Assignment,
    eps: &Rational,
) -> Result<Rational, ProofError> {
    let target = Target::new(g, eps)?;
    if ra.fam.position(u).is_none() {
        return Err(ProofError::NotOnSideA(u));
    }
    if u == ra.root {
        return Ok(Rational::one() + eps);
    }
    let images = images_of(x, &ra.conditioning_set(u), g.n())?;
    Ok(target.conditional(&images))
}

/// `f_{T_r}` at a full assignment of `A ∪ B`.
pub fn f_tree(ra: &RootedArrangement, g: &Graph, x: &Assignment, eps: &Rational) -> Result<Rational, ProofError> {
    let target = Target::new(g, eps)?;
    let mut value = Rational::one();
    for &a in ra.fam.side_a() {
        let y = x.require(a, g.n())?;
        value *= target.f(y, &images_of(x, ra.fam.lambda(a), g.n())?);
        value /= if a == ra.root {
            Rational::one() + eps
        } else {
            target.conditional(&images_of(x, &ra.conditioning_set(a), g.n())?)
        };
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    RootInvariance {
        assignment: Vec<usize>,
        roots: (usize, usize),
        values: (RatString, RatString),
    },
    UnitExpectation {
        expectation: RatString,
    },
    Pattern {
        u: usize,
        /// `x_u` followed by `x(Λ_u)` in ascending order of `Λ_u`.
        pattern: Vec<usize>,
        /// `(1 + ε) E[g f_{T_r}]`.
        tree_side: RatString,
        /// `E[g f_u]`.
        vertex_side: RatString,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub eps: RatString,
    pub side_a: Vec<usize>,
    pub tree: TreeEdges,
    /// Whether the tree passes the arrangement check. Identities are
    /// evaluated either way.
    pub arrangement_holds: bool,
    pub assignments: u64,
    pub identities: Vec<IdentityResult>,
    pub all_pass: bool,
}

/// Sums gathered over the assignments sharing one value of `x(0)`.
struct Partial {
    root_failure: Option<Witness>,
    total: Rational,
    tree_sums: Vec<HashMap<Vec<usize>, Rational>>,
    vertex_sums: Vec<HashMap<Vec<usize>, Rational>>,
}

/// Evaluates the three identities by full enumeration.
///
/// `side_a` must be one side of a bipartition of `h` and `tree` must span
/// it; the tree need not be an arrangement.
pub fn check_section2_identities(
    h: &Graph,
    side_a: &[usize],
    tree: &[(usize, usize)],
    g: &Graph,
    eps: &Rational,
) -> Result<IdentityReport, ProofError> {
    let target = Target::new(g, eps)?;
    let fam = NeighborhoodFamily::from_graph(h, side_a)?;
    let on_a: BTreeSet<usize> = fam.side_a().iter().copied().collect();
    if let Some((u, v)) = h.edges().find(|(u, v)| !on_a.contains(u) && !on_a.contains(v)) {
        return Err(ProofError::NotABipartition(u, v));
    }
    let arrangement_holds = check_arrangement(&fam, tree)?.holds;
    let n = g.n();
    let nh = h.n();
    let total = (n as u128).checked_pow(nh as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_LIMIT {
        return Err(ProofError::TooLarge(total));
    }

    let side: Vec<usize> = fam.side_a().to_vec();
    let lambdas: Vec<Vec<usize>> = side.iter().map(|&a| fam.lambda(a).iter().copied().collect()).collect();
    // conditioning sets for every root, by position in `side`
    let rooted: Vec<Vec<Option<Vec<usize>>>> = side
        .iter()
        .map(|&r| {
            let ra = RootedArrangement::new_unverified(fam.clone(), tree.to_vec(), r)?;
            Ok(side
                .iter()
                .map(|&a| (a != r).then(|| ra.conditioning_set(a).into_iter().collect()))
                .collect())
        })
        .collect::<Result<_, ProofError>>()?;
    let one_eps = Rational::one() + eps;

    let tree_value = |x: &[usize], fs: &[Rational], root: usize| -> Rational {
        let mut value = Rational::one();
        for (i, f) in fs.iter().enumerate() {
            value *= f;
            value /= match &rooted[root][i] {
                None => one_eps.clone(),
                Some(s) => {
                    let imgs: Vec<usize> = s.iter().map(|&b| x[b]).collect();
                    target.conditional(&imgs)
                }
            };
        }
        value
    };

    let first_values: Vec<usize> = if nh == 0 { vec![0] } else { (0..n).collect() };
    let partials: Vec<Partial> = first_values
        .into_par_iter()
        .map(|x0| {
            let mut p = Partial {
                root_failure: None,
                total: Rational::zero(),
                tree_sums: vec![HashMap::new(); side.len()],
                vertex_sums: vec![HashMap::new(); side.len()],
            };
            let mut x = vec![0usize; nh];
            if nh > 0 {
                x[0] = x0;
            }
            loop {
                let fs: Vec<Rational> = side
                    .iter()
                    .zip(&lambdas)
                    .map(|(&a, l)| {
                        let imgs: Vec<usize> = l.iter().map(|&b| x[b]).collect();
                        target.f(x[a], &imgs)
                    })
                    .collect();
                let value = if side.is_empty() {
                    Rational::one()
                } else {
                    tree_value(&x, &fs, 0)
                };
                if p.root_failure.is_none() {
                    for r in 1..side.len() {
                        let other = tree_value(&x, &fs, r);
                        if other != value {
                            p.root_failure = Some(Witness::RootInvariance {
                                assignment: x.clone(),
                                roots: (side[0], side[r]),
                                values: (RatString(value.clone()), RatString(other)),
                            });
                            break;
                        }
                    }
                }
                for (i, &a) in side.iter().enumerate() {
                    let mut key = vec![x[a]];
                    key.extend(lambdas[i].iter().map(|&b| x[b]));
                    *p.tree_sums[i].entry(key.clone()).or_insert_with(Rational::zero) += &value;
                    *p.vertex_sums[i].entry(key).or_insert_with(Rational::zero) += &fs[i];
                }
                p.total += value;
                if !advance(&mut x[1.min(nh)..], n) {
                    break;
                }
            }
            p
        })
        .collect();

    let mut root_failure = None;
    let mut sum = Rational::zero();
    let mut tree_sums: Vec<HashMap<Vec<usize>, Rational>> = vec![HashMap::new(); side.len()];
    let mut vertex_sums = tree_sums.clone();
    for p in partials {
        if root_failure.is_none() {
            root_failure = p.root_failure;
        }
        sum += p.total;
        for (acc, part) in tree_sums.iter_mut().zip(p.tree_sums) {
            for (k, v) in part {
                *acc.entry(k).or_insert_with(Rational::zero) += v;
            }
        }
        for (acc, part) in vertex_sums.iter_mut().zip(p.vertex_sums) {
            for (k, v) in part {
                *acc.entry(k).or_insert_with(Rational::zero) += v;
            }
        }
    }

    let count = Rational::from_integer(total.into());
    let expectation = sum / &count;
    let unit_pass = expectation.is_one();

    let mut pattern_failure = None;
    'outer: for (i, &u) in side.iter().enumerate() {
        let mut keys: Vec<&Vec<usize>> = tree_sums[i].keys().collect();
        keys.sort();
        for key in keys {
            let lhs = &tree_sums[i][key] * &one_eps / &count;
            let rhs = &vertex_sums[i][key] / &count;
            if lhs != rhs {
                pattern_failure = Some(Witness::Pattern {
                    u,
                    pattern: key.clone(),
                    tree_side: RatString(lhs),
                    vertex_side: RatString(rhs),
                });
                break 'outer;
            }
        }
    }

    let identities = vec![
        IdentityResult {
            name: "root-invariance".into(),
            pass: root_failure.is_none(),
            witness: root_failure,
        },
        IdentityResult {
            name: "unit-expectation".into(),
            pass: unit_pass,
            witness: (!unit_pass).then(|| Witness::UnitExpectation {
                expectation: RatString(expectation),
            }),
        },
        IdentityResult {
            name: "pattern-expectation".into(),
            pass: pattern_failure.is_none(),
            witness: pattern_failure,
        },
    ];
    Ok(IdentityReport {
        eps: RatString(eps.clone()),
        side_a: side,
        tree: tree.to_vec(),
        arrangement_holds,
        assignments: total as u64,
        all_pass: identities.iter().all(|r| r.pass),
        identities,
    })
}

/// Odometer step over `[n]^len`; false after the last tuple.
fn advance(x: &mut [usize], n: usize) -> bool {
    for d in x.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}
