//! Exact homomorphism counts and densities.
//!
//! Two independent routes compute `|Hom(H, G)|`: pruned enumeration
//! ([`count_hom_bruteforce`]) and dynamic programming over a tree
//! decomposition of `H` ([`count_hom_dp`]). Densities are exact rationals.

mod brute;
mod dp;
mod treedec;

pub use brute::{all_homs, count_hom_bruteforce, for_each_hom, BRUTE_FORCE_LIMIT};
pub use dp::{weighted_hom_sum, NiceDecomposition, NiceNode};
pub use treedec::{tree_decomposition, DecompositionError, TreeDecomposition};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::graph::Graph;
use crate::rational::{BigCount, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error(
        "brute force refused for |V(H)| = {h_vertices}, |V(G)| = {g_vertices}; use the tree-decomposition counter"
    )]
    TooLargeForBruteForce { h_vertices: usize, g_vertices: usize },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(#[from] DecompositionError),
    #[error("target graph has no vertices")]
    EmptyTarget,
    #[error("weight matrix is not symmetric at ({0}, {1})")]
    AsymmetricWeights(usize, usize),
    #[error("weight matrix has a negative entry at ({0}, {1})")]
    NegativeWeight(usize, usize),
    #[error("weight matrix needs {expected} entries, got {found}")]
    WeightShape { expected: usize, found: usize },
}

/// `|Hom(H, G)|` by dynamic programming over `td`, which is validated first.
pub fn count_hom_dp(h: &Graph, g: &Graph, td: &TreeDecomposition) -> Result<BigCount, HomError> {
    td.validate(h)?;
    Ok(weighted_hom_sum(
        h,
        g.n(),
        td,
        |x, y| g.has_edge(x, y).then(BigUint::one),
        true,
    ))
}

/// `|Hom(H, G)|` using the heuristic decomposition of `H`.
pub fn count_hom(h: &Graph, g: &Graph) -> BigCount {
    let td = tree_decomposition(h);
    weighted_hom_sum(h, g.n(), &td, |x, y| g.has_edge(x, y).then(BigUint::one), true)
}

/// `t_H(G) = |Hom(H, G)| / |V(G)|^|V(H)|`.
pub fn density(h: &Graph, g: &Graph) -> Result<Rational, HomError> {
    if g.n() == 0 {
        return Err(HomError::EmptyTarget);
    }
    let count = count_hom(h, g);
    let total = num_traits::pow(BigUint::from(g.n()), h.n());
    Ok(Rational::new(BigInt::from(count), BigInt::from(total)))
}

/// Symmetric non-negative `n x n` matrix: a step-function kernel on `[0,1]^2`
/// with `n` equal steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl WeightMatrix {
    /// `entries` is row-major.
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self, HomError> {
        if entries.len() != n * n {
            return Err(HomError::WeightShape {
                expected: n * n,
                found: entries.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i * n + j].is_negative() {
                    return Err(HomError::NegativeWeight(i, j));
                }
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(HomError::AsymmetricWeights(i, j));
                }
            }
        }
        Ok(WeightMatrix { n, entries })
    }

    /// 0/1 adjacency matrix of `g`.
    pub fn adjacency(g: &Graph) -> Self {
        let n = g.n();
        let entries = (0..n * n)
            .map(|k| {
                if g.has_edge(k / n, k % n) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        WeightMatrix { n, entries }
    }

    pub fn constant(n: usize, c: Rational) -> Result<Self, HomError> {
        WeightMatrix::new(n, vec![c; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }
}

/// `n^{-|V(H)|} Σ_{x: V(H) -> [n]} Π_{uv ∈ E(H)} w(x_u, x_v)`.
pub fn weighted_density(h: &Graph, w: &WeightMatrix) -> Result<Rational, HomError> {
    if w.n == 0 {
        return Err(HomError::EmptyTarget);
    }
    let td = tree_decomposition(h);
    let sum: Rational = weighted_hom_sum(
        h,
        w.n,
        &td,
        |x, y| {
            let v = w.get(x, y);
            (!v.is_zero()).then(|| v.clone())
        },
        false,
    );
    let total = num_traits::pow(BigInt::from(w.n), h.n());
    Ok(sum / Rational::from_integer(total))
}
