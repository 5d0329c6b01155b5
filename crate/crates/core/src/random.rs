//! Seeded Erdős–Rényi graphs.
//!
//! Generator: ChaCha20 as implemented by `rand_chacha` 0.3, seeded through
//! `SeedableRng::seed_from_u64`. Pairs `(i, j)`, `i < j`, are visited in
//! lexicographic order and each consumes one `next_u64` draw `x`; the pair is
//! an edge iff `x / 2^64 < p`, evaluated exactly as `x * q < p_num * 2^64`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::graph::Graph;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("edge probability {0} is outside [0, 1]")]
pub struct ProbabilityError(pub String);

/// Exact threshold test for one 64-bit draw.
#[derive(Debug, Clone)]
struct Threshold {
    num: BigInt,
    den: BigInt,
}

impl Threshold {
    fn new(p: &Rational) -> Result<Self, ProbabilityError> {
        if p.is_negative() || p > &Rational::one() {
            return Err(ProbabilityError(format_rational(p)));
        }
        Ok(Threshold {
            num: p.numer() << 64,
            den: p.denom().clone(),
        })
    }

    fn accept(&self, draw: u64) -> bool {
        if self.num.is_zero() {
            return false;
        }
        BigInt::from(draw) * &self.den < self.num
    }
}

pub fn random_gnp(n: usize, p: &Rational, seed: u64) -> Result<Graph, ProbabilityError> {
    let threshold = Threshold::new(p)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if threshold.accept(rng.next_u64()) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges).expect("pairs are in range"))
}

/// A seeded ensemble: member `i` is `random_gnp(n, p, seed + i)` (wrapping).
pub fn gnp_ensemble(
    n: usize,
    p: &Rational,
    seed: u64,
    count: usize,
) -> Result<Vec<Graph>, ProbabilityError> {
    (0..count as u64)
        .map(|i| random_gnp(n, p, seed.wrapping_add(i)))
        .collect()
}

/// Random bipartite graph with the given side sizes; side A is `0..a`.
pub fn random_bipartite(a: usize, b: usize, p: &Rational, seed: u64) -> Result<Graph, ProbabilityError> {
    let threshold = Threshold::new(p)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            if threshold.accept(rng.next_u64()) {
                edges.push((i, a + j));
            }
        }
    }
    Ok(Graph::from_edges(a + b, edges).expect("pairs are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn extremes() {
        for seed in [0, 1, 99] {
            assert_eq!(random_gnp(5, &ratio(0, 1), seed).unwrap().edge_count(), 0);
            assert_eq!(random_gnp(5, &ratio(1, 1), seed).unwrap().edge_count(), 10);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(random_gnp(3, &ratio(3, 2), 0).is_err());
        assert!(random_gnp(3, &ratio(-1, 2), 0).is_err());
    }

    #[test]
    fn deterministic() {
        let a = random_gnp(12, &ratio(1, 3), 42).unwrap();
        let b = random_gnp(12, &ratio(1, 3), 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_gnp(12, &ratio(1, 3), 43).unwrap());
    }

    #[test]
    fn half_density_within_four_sigma() {
        // 190 pairs, mean 95, sigma = sqrt(190/4) ~ 6.89
        let m = random_gnp(20, &ratio(1, 2), 7).unwrap().edge_count() as f64;
        assert!((m - 95.0).abs() <= 4.0 * (190.0f64 / 4.0).sqrt(), "{m}");
    }
}
