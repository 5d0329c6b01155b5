use num_bigint::BigUint;
use rayon::prelude::*;

use super::HomError;
use crate::graph::Graph;
use crate::rational::BigCount;

/// Largest `|V(G)|^|V(H)|` the brute-force counter accepts (8^10).
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 30;

/// Assignment order for backtracking: `H` in BFS order, and for every
/// position the positions of its earlier neighbours.
struct Plan {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
}

impl Plan {
    fn new(h: &Graph) -> Self {
        let order = h.bfs_order();
        let mut pos = vec![0; h.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                h.neighbors(v)
                    .iter()
                    .map(|&w| pos[w])
                    .filter(|&p| p < i)
                    .collect()
            })
            .collect();
        Plan { order, back }
    }
}

fn fits_brute_force(h: &Graph, g: &Graph) -> bool {
    (g.n() as u128)
        .checked_pow(h.n() as u32)
        .is_some_and(|w| w <= BRUTE_FORCE_LIMIT)
}

/// `|Hom(H, G)|` by pruned enumeration.
///
/// Vertices of `H` are assigned in BFS order and each candidate image is
/// checked against already-assigned neighbours. Work is split over the image
/// of the first vertex; branch totals are summed in index order.
pub fn count_hom_bruteforce(h: &Graph, g: &Graph) -> Result<BigCount, HomError> {
    if !fits_brute_force(h, g) {
        return Err(HomError::TooLargeForBruteForce {
            h_vertices: h.n(),
            g_vertices: g.n(),
        });
    }
    if h.n() == 0 {
        return Ok(BigUint::from(1u8));
    }
    let plan = Plan::new(h);
    let branches: Vec<u64> = (0..g.n())
        .into_par_iter()
        .map(|x| {
            let mut img = vec![0usize; h.n()];
            img[0] = x;
            count_from(&plan, g, &mut img, 1)
        })
        .collect();
    Ok(branches.into_iter().map(BigUint::from).sum())
}

fn count_from(plan: &Plan, g: &Graph, img: &mut [usize], depth: usize) -> u64 {
    if depth == plan.order.len() {
        return 1;
    }
    let back = &plan.back[depth];
    let mut total = 0;
    match back.first() {
        Some(&p) => {
            for &x in g.neighbors(img[p]) {
                if back[1..].iter().all(|&q| g.has_edge(img[q], x)) {
                    img[depth] = x;
                    total += count_from(plan, g, img, depth + 1);
                }
            }
        }
        None => {
            for x in 0..g.n() {
                img[depth] = x;
                total += count_from(plan, g, img, depth + 1);
            }
        }
    }
    total
}

/// Calls `visit` with every homomorphism `H -> G`, given as the image of
/// each vertex of `H` (indexed by vertex). No size guard.
pub fn for_each_hom(h: &Graph, g: &Graph, mut visit: impl FnMut(&[usize])) {
    let plan = Plan::new(h);
    let mut img = vec![0usize; h.n()];
    let mut out = vec![0usize; h.n()];
    walk(&plan, g, &mut img, &mut out, 0, &mut visit);
}

fn walk(
    plan: &Plan,
    g: &Graph,
    img: &mut [usize],
    out: &mut [usize],
    depth: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == plan.order.len() {
        for (i, &v) in plan.order.iter().enumerate() {
            out[v] = img[i];
        }
        visit(out);
        return;
    }
    let back = &plan.back[depth];
    let candidates: Box<dyn Iterator<Item = usize>> = match back.first() {
        Some(&p) => Box::new(g.neighbors(img[p]).to_vec().into_iter()),
        None => Box::new(0..g.n()),
    };
    for x in candidates {
        if back.iter().all(|&q| g.has_edge(img[q], x)) {
            img[depth] = x;
            walk(plan, g, img, out, depth + 1, visit);
        }
    }
}

/// All homomorphisms in lexicographic order of the image tuple.
pub fn all_homs(h: &Graph, g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_hom(h, g, |m| out.push(m.to_vec()));
    out.sort_unstable();
    out
}
