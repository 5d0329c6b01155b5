use std::collections::BTreeSet;

use proptest::prelude::*;
use sidokit::arrange::{
    check_arrangement, check_path_condition, decide_tree_arrangeable, labeled_trees, mwst_candidate_tree,
    neighbor_covering_reduction, NeighborhoodFamily,
};
use sidokit::construct::{cartesian_product, degree_split, path, phi, psi, tensor_product, PSI_VERTEX_LIMIT};
use sidokit::graph::{bipartitions, BipartiteStructure};
use sidokit::graph6::{parse_graph6, write_graph6};
use sidokit::hom::{count_hom, count_hom_bruteforce, density};
use sidokit::iso::{find_isomorphism, is_isomorphic};
use sidokit::proof::{cond_expectation_f, Assignment, RootedArrangement};
use sidokit::rational::{format_rational, parse_rational, Rational};
use sidokit::verify::{classify, replay, sidorenko_check};
use sidokit::Graph;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut it = bits.into_iter();
            Graph::from_fn(n, |_, _| it.next().unwrap())
        })
    })
}

fn nonempty_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_filter("at least one vertex", |g| g.n() > 0)
}

/// Bipartite graph with sides `0..a` and `a..a+b`.
fn bipartite(max_a: usize, max_b: usize) -> impl Strategy<Value = Graph> {
    (1..=max_a, 1..=max_b).prop_flat_map(|(a, b)| {
        proptest::collection::vec(any::<bool>(), a * b)
            .prop_map(move |bits| Graph::from_fn(a + b, |u, v| u < a && v >= a && bits[u * b + (v - a)]))
    })
}

fn permuted(g: Graph) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    let n = g.n();
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |perm| (g.clone(), perm))
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_two_colourable(g: &Graph) -> bool {
    (0u32..1 << g.n()).any(|mask| g.edges().all(|(u, v)| (mask >> u & 1) != (mask >> v & 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trip(g in graph(12)) {
        let text = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn graph6_round_trip_wide(n in 60usize..70, seed in any::<u64>()) {
        let g = sidokit::random::random_gnp(n, &sidokit::rational::ratio(1, 10), seed).unwrap();
        let text = write_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn rational_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let r = Rational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn bipartitions_match_brute_force(g in graph(8)) {
        match bipartitions(&g) {
            BipartiteStructure::Bipartite(c) => {
                prop_assert!(brute_two_colourable(&g));
                prop_assert_eq!(c.assignment_count(), 1u128 << g.components().len());
                for bip in c.assignments() {
                    prop_assert!(bip.is_valid_for(&g));
                }
            }
            BipartiteStructure::OddCycle(cycle) => {
                prop_assert!(!brute_two_colourable(&g));
                prop_assert!(cycle.len() % 2 == 1);
                for i in 0..cycle.len() {
                    prop_assert!(g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]));
                }
            }
        }
    }

    #[test]
    fn isomorphism_matches_exhaustive_search(g1 in graph(6), g2 in graph(6)) {
        let exhaustive = g1.n() == g2.n()
            && g1.edge_count() == g2.edge_count()
            && all_perms(g1.n()).iter().any(|p| g1.relabel(p) == g2);
        prop_assert_eq!(is_isomorphic(&g1, &g2), exhaustive);
    }

    #[test]
    fn relabelled_graphs_are_isomorphic((g, perm) in graph(9).prop_flat_map(permuted)) {
        let h = g.relabel(&perm);
        let map = find_isomorphism(&g, &h).expect("relabelled copy");
        prop_assert!(g.edges().all(|(u, v)| h.has_edge(map[u], map[v])));
        prop_assert_eq!(map.iter().collect::<BTreeSet<_>>().len(), g.n());
    }

    #[test]
    fn dp_matches_brute_force(h in graph(6), g in graph(5)) {
        prop_assert_eq!(count_hom(&h, &g), count_hom_bruteforce(&h, &g).unwrap());
    }

    #[test]
    fn tensor_product_is_multiplicative(h in graph(4), g1 in graph(4), g2 in graph(3)) {
        let product = tensor_product(&g1, &g2);
        prop_assert_eq!(count_hom(&h, &product), count_hom(&h, &g1) * count_hom(&h, &g2));
    }

    #[test]
    fn disjoint_union_factorises(h1 in graph(4), h2 in graph(4), g in graph(5)) {
        prop_assert_eq!(count_hom(&h1.disjoint_union(&h2), &g), count_hom(&h1, &g) * count_hom(&h2, &g));
    }

    #[test]
    fn psi_counts_product_homs(h in bipartite(2, 2), g in nonempty_graph(4), tau in 1usize..=3) {
        let t = path(tau);
        let p = psi(&t, &g, PSI_VERTEX_LIMIT).unwrap();
        prop_assert_eq!(count_hom(&cartesian_product(&t, &h).graph, &g), count_hom(&h, &p.graph));
    }

    #[test]
    fn phi_of_bipartite_is_k2_product(h in bipartite(3, 3)) {
        prop_assert!(is_isomorphic(&phi(&h), &cartesian_product(&path(2), &h).graph));
    }

    #[test]
    fn degree_split_invariants(g in graph(8)) {
        prop_assume!(g.edge_count() > 0);
        let s = degree_split(&g).unwrap();
        prop_assert_eq!(s.graph.edge_count(), g.edge_count());
        prop_assert!(s.graph.n() <= 2 * g.n());
        prop_assert!(s.graph.max_degree() * s.graph.n() <= 4 * s.graph.edge_count());
        prop_assert!(s.graph.edges().all(|(x, y)| g.has_edge(s.origin[x], s.origin[y])));
    }

    #[test]
    fn arrangement_checks_agree(h in bipartite(5, 5), pick in any::<prop::sample::Index>()) {
        let side: Vec<usize> = (0..h.n()).filter(|&v| h.neighbors(v).iter().all(|&w| w >= v)).collect();
        let fam = NeighborhoodFamily::from_graph(&h, &side).unwrap();
        let trees = labeled_trees(fam.side_a());
        let tree = &trees[pick.index(trees.len())];
        let fast = check_arrangement(&fam, tree).unwrap();
        let slow = check_path_condition(&fam, tree).unwrap();
        prop_assert_eq!(fast.holds, slow.is_none());
        if let Some(v) = &fast.violation {
            prop_assert!(v.recheck(&fam, tree));
        }
        // any tree weighs at most the support bound, with equality exactly on arrangements
        let weight = fam.tree_weight(tree);
        prop_assert!(weight <= fam.support_bound());
        prop_assert_eq!(weight == fam.support_bound(), fast.holds);
    }

    #[test]
    fn spanning_tree_decision_matches_exhaustive(h in bipartite(5, 5)) {
        let side_a: Vec<usize> = (0..h.n()).filter(|&v| h.neighbors(v).iter().all(|&w| w > v)).collect();
        let fam = NeighborhoodFamily::from_graph(&h, &side_a).unwrap();
        let (reduced, covering) = neighbor_covering_reduction(&fam);
        let candidate = mwst_candidate_tree(&reduced);
        let fast = check_arrangement(&reduced, &candidate).unwrap().holds;
        let exhaustive = labeled_trees(fam.side_a()).iter().any(|t| check_arrangement(&fam, t).unwrap().holds);
        prop_assert_eq!(fast, exhaustive);
        if fast {
            prop_assert!(check_arrangement(&fam, &covering.extend_tree(&candidate)).unwrap().holds);
        }
    }

    #[test]
    fn certificates_recheck((h, perm) in bipartite(4, 4).prop_flat_map(permuted)) {
        let cert = decide_tree_arrangeable(&h).unwrap();
        prop_assert!(cert.recheck(&h));
        let relabelled = decide_tree_arrangeable(&h.relabel(&perm)).unwrap();
        prop_assert_eq!(cert.is_arrangeable(), relabelled.is_arrangeable());
    }

    #[test]
    fn subtrees_of_arrangements_are_arrangements(h in bipartite(5, 4), cut in any::<prop::sample::Index>()) {
        let cert = decide_tree_arrangeable(&h).unwrap();
        prop_assume!(cert.is_arrangeable());
        let side = cert.bipartition.unwrap().side_a;
        let tree = cert.tree.unwrap();
        prop_assume!(!tree.is_empty());
        let fam = NeighborhoodFamily::from_graph(&h, &side).unwrap();
        // removing one tree edge leaves two subtrees
        let (u, _) = tree[cut.index(tree.len())];
        let ra = RootedArrangement::new(fam.clone(), tree.clone(), u).unwrap();
        for &v in &side {
            prop_assert_eq!(ra.component_union(v), ra.conditioning_set(v));
            let part = ra.root_component(v);
            if part.is_empty() {
                continue;
            }
            let sub: Vec<(usize, usize)> =
                tree.iter().copied().filter(|(a, b)| part.contains(a) && part.contains(b)).collect();
            prop_assert!(check_arrangement(&fam.restrict(&part), &sub).unwrap().holds);
        }
    }

    #[test]
    fn conditional_expectation_is_local(
        h in bipartite(3, 3),
        g in nonempty_graph(4),
        xs in proptest::collection::vec(0usize..4, 6),
        ys in proptest::collection::vec(0usize..4, 6),
    ) {
        prop_assume!(!g.has_isolated_vertex());
        let cert = decide_tree_arrangeable(&h).unwrap();
        prop_assume!(cert.is_arrangeable());
        let side = cert.bipartition.unwrap().side_a;
        let fam = NeighborhoodFamily::from_graph(&h, &side).unwrap();
        let ra = RootedArrangement::new(fam, cert.tree.unwrap(), side[0]).unwrap();
        let eps = sidokit::rational::ratio(1, 10);
        let x: Vec<usize> = xs.iter().take(h.n()).map(|v| v % g.n()).collect();
        for &u in &side {
            let keep = ra.conditioning_set(u);
            let y: Vec<usize> = (0..h.n()).map(|v| if keep.contains(&v) { x[v] } else { ys[v] % g.n() }).collect();
            prop_assert_eq!(
                cond_expectation_f(&ra, &g, u, &Assignment::full(&x), &eps).unwrap(),
                cond_expectation_f(&ra, &g, u, &Assignment::full(&y), &eps).unwrap()
            );
        }
    }

    #[test]
    fn verdict_is_invariant_under_relabelling(
        (h, hp) in bipartite(3, 3).prop_flat_map(permuted),
        (g, gp) in nonempty_graph(5).prop_flat_map(permuted),
    ) {
        prop_assume!(h.edge_count() > 0);
        let a = sidorenko_check(&h, &g).unwrap();
        let b = sidorenko_check(&h.relabel(&hp), &g.relabel(&gp)).unwrap();
        prop_assert_eq!(a.margin, b.margin);
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(a.holds, a.lhs >= a.rhs);
    }

    #[test]
    fn tensor_square_squares_density(h in bipartite(2, 2), g in nonempty_graph(4)) {
        prop_assume!(h.edge_count() > 0);
        let once = density(&h, &g).unwrap();
        let twice = density(&h, &tensor_product(&g, &g)).unwrap();
        prop_assert_eq!(&twice, &(&once * &once));
        let v = sidorenko_check(&h, &g).unwrap();
        if v.holds {
            prop_assert!(sidorenko_check(&h, &tensor_product(&g, &g)).unwrap().holds);
        }
    }

    #[test]
    fn degree_split_never_adds_homs(g in graph(7)) {
        prop_assume!(g.edge_count() > 0);
        let split = degree_split(&g).unwrap().graph;
        for h in [sidokit::construct::named("cycle", &[4]).unwrap(), path(4)] {
            prop_assert!(count_hom(&h, &g) >= count_hom(&h, &split));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classification_replays((h, perm) in bipartite(3, 3).prop_flat_map(permuted)) {
        let rec = classify("h", &h).unwrap();
        prop_assert_eq!(replay(&h, &rec), rec.status);
        let other = classify("h", &h.relabel(&perm)).unwrap();
        prop_assert_eq!(other.status, rec.status);
    }
}
