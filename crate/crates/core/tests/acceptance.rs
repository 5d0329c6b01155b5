//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! each with its elapsed time, and exits non-zero if any criterion fails or
//! runs over its time budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use sidokit::arrange::{
    check_arrangement, decide_tree_arrangeable, labeled_trees, mwst_candidate_tree, neighbor_covering_reduction,
    NeighborhoodFamily,
};
use sidokit::construct::{
    cartesian_product, complete_bipartite, degree_split, lift_hom, named, path, phi, project_hom, psi,
};
use sidokit::graph::{bipartitions, BipartiteStructure};
use sidokit::graph6::write_graph6;
use sidokit::hom::{all_homs, count_hom, count_hom_bruteforce, count_hom_dp, tree_decomposition};
use sidokit::iso::is_isomorphic;
use sidokit::proof::check_section2_identities;
use sidokit::random::{random_bipartite, random_gnp};
use sidokit::rational::{format_rational, ratio, Rational};
use sidokit::verify::{classify, sidorenko_check, Status};
use sidokit::Graph;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every graph on `n` vertices, one per isomorphism class.
fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out: Vec<Graph> = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let g = Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
            .unwrap();
        if !out.iter().any(|h| is_isomorphic(h, &g)) {
            out.push(g);
        }
    }
    out
}

fn is_tree(g: &Graph) -> bool {
    g.n() > 0 && g.edge_count() + 1 == g.n() && g.is_connected()
}

/// Round-trip enumeration is skipped above this many homomorphisms; the
/// counts are still compared.
const ROUND_TRIP_CAP: u64 = 300_000;

fn criterion_1() -> Outcome {
    let small: Vec<Graph> = (1..=4).flat_map(graphs_up_to_iso).collect();
    let trees: Vec<&Graph> = small.iter().filter(|g| is_tree(g)).collect();
    let hs: Vec<&Graph> = small.iter().filter(|g| g.is_bipartite()).collect();
    let (mut triples, mut round_trips) = (0usize, 0usize);
    for t in &trees {
        for h in &hs {
            let product = cartesian_product(t, h).graph;
            for g in &small {
                triples += 1;
                let p = psi(t, g, usize::MAX).map_err(|e| e.to_string())?;
                let direct = count_hom(&product, g);
                let via_psi = count_hom(h, &p.graph);
                ensure(direct == via_psi, || {
                    format!("T={t:?} H={h:?} G={g:?}: {direct} vs {via_psi}")
                })?;
                if direct.to_u64().is_some_and(|c| c <= ROUND_TRIP_CAP) {
                    round_trips += 1;
                    let homs = all_homs(&product, g);
                    let mut lifted_set = BTreeSet::new();
                    for f in &homs {
                        let lifted = lift_hom(&p, t, h, g, f).map_err(|e| e.to_string())?;
                        let back = project_hom(&p, t, h, &lifted).map_err(|e| e.to_string())?;
                        ensure(&back == f, || format!("round trip broke on {f:?}"))?;
                        lifted_set.insert(lifted);
                    }
                    ensure(lifted_set.len() == homs.len(), || "lift is not injective".into())?;
                    let all_h = all_homs(h, &p.graph);
                    ensure(all_h.len() == homs.len(), || "lift is not onto".into())?;
                }
            }
        }
    }
    ensure(triples >= 200, || format!("only {triples} triples"))?;
    Ok(format!(
        "{} trees x {} bipartite H x {} G = {triples} triples, {round_trips} full round trips",
        trees.len(),
        hs.len(),
        small.len()
    ))
}

fn criterion_2() -> Outcome {
    let ps = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    for i in 0..100u64 {
        let h = random_gnp(1 + (i % 7) as usize, &ps[(i % 3) as usize], 1000 + i).unwrap();
        let g = random_gnp(1 + (i % 5) as usize, &ps[((i / 3) % 3) as usize], 2000 + i).unwrap();
        let td = tree_decomposition(&h);
        let dp = count_hom_dp(&h, &g, &td).map_err(|e| e.to_string())?;
        let brute = count_hom_bruteforce(&h, &g).map_err(|e| e.to_string())?;
        ensure(dp == brute, || format!("pair {i}: dp {dp} vs brute {brute}"))?;
    }
    Ok("100 random pairs agree".into())
}

/// Corpus for the arrangeability comparison.
fn arrangeability_corpus() -> Vec<(String, Graph)> {
    let mut corpus: Vec<(String, Graph)> = vec![
        ("C6".into(), named("cycle", &[6]).unwrap()),
        ("K33".into(), complete_bipartite(3, 3)),
        ("K55-C10".into(), named("k55_minus_c10", &[]).unwrap()),
        ("Q3".into(), named("hypercube", &[3]).unwrap()),
    ];
    for n in [4, 8, 10] {
        corpus.push((format!("C{n}"), named("cycle", &[n]).unwrap()));
    }
    for (a, b) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3)] {
        corpus.push((format!("grid{a}x{b}"), named("grid", &[a, b]).unwrap()));
    }
    for a in 1..=5 {
        for b in a..=5 {
            corpus.push((format!("K{a},{b}"), complete_bipartite(a, b)));
        }
    }
    // every bipartite graph with sides of size 3 and 3, up to relabelling
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    let mut seen: Vec<Graph> = Vec::new();
    for mask in 0u32..1 << 9 {
        let g = Graph::from_edges(6, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
            .unwrap();
        if !seen.iter().any(|s| is_isomorphic(s, &g)) {
            seen.push(g.clone());
            corpus.push((format!("bip3x3#{mask}"), g));
        }
    }
    let ps = [ratio(1, 3), ratio(1, 2), ratio(2, 3)];
    for seed in 0..300u64 {
        let (a, b) = (1 + (seed % 5) as usize, 1 + ((seed / 5) % 5) as usize);
        let g = random_bipartite(a, b, &ps[(seed % 3) as usize], 77 + seed).unwrap();
        corpus.push((format!("rb{a}x{b}s{seed}"), g));
    }
    corpus
}

fn criterion_3() -> Outcome {
    let corpus = arrangeability_corpus();
    let mut compared = 0usize;
    let mut expected = vec![("C6", Some(false)), ("K33", Some(true)), ("K55-C10", Some(false))];
    for (name, h) in &corpus {
        let BipartiteStructure::Bipartite(colorings) = bipartitions(h) else {
            return Err(format!("{name} is not bipartite"));
        };
        let mut any_exhaustive = false;
        let mut all_small = true;
        for bip in colorings.assignments() {
            if bip.side_a.len() > 5 {
                all_small = false;
                continue;
            }
            let fam = NeighborhoodFamily::from_graph(h, &bip.side_a).map_err(|e| e.to_string())?;
            let (reduced, _) = neighbor_covering_reduction(&fam);
            let candidate = mwst_candidate_tree(&reduced);
            let fast = check_arrangement(&reduced, &candidate).map_err(|e| e.to_string())?.holds;
            let exhaustive = labeled_trees(fam.side_a())
                .iter()
                .any(|t| check_arrangement(&fam, t).is_ok_and(|c| c.holds));
            ensure(fast == exhaustive, || {
                format!("{name} side {:?}: spanning-tree answer {fast}, exhaustive {exhaustive}", bip.side_a)
            })?;
            any_exhaustive |= exhaustive;
            compared += 1;
        }
        let cert = decide_tree_arrangeable(h).map_err(|e| e.to_string())?;
        ensure(cert.recheck(h), || format!("{name}: certificate does not recheck"))?;
        if all_small {
            ensure(cert.is_arrangeable() == any_exhaustive, || {
                format!("{name}: decider says {}, exhaustive {any_exhaustive}", cert.is_arrangeable())
            })?;
        }
        for (label, want) in expected.iter_mut() {
            if label == name {
                ensure(Some(cert.is_arrangeable()) == *want, || format!("{name} decided wrongly"))?;
                *want = None;
            }
        }
    }
    ensure(expected.iter().all(|(_, w)| w.is_none()), || "named cases missing".into())?;
    Ok(format!("{} graphs, {compared} side assignments compared", corpus.len()))
}

fn criterion_4() -> Outcome {
    let cases: Vec<(&str, Graph)> = vec![
        ("K1,2", named("star", &[2]).unwrap()),
        ("K1,3", named("star", &[3]).unwrap()),
        ("P4", path(4)),
        ("P5", path(5)),
        ("C4", named("cycle", &[4]).unwrap()),
        ("K2,3", complete_bipartite(2, 3)),
        ("K3,2", complete_bipartite(3, 2)),
    ];
    let targets = [
        ("K2", path(2)),
        ("K3", named("complete", &[3]).unwrap()),
        ("P3", path(3)),
    ];
    let mut instances = 0usize;
    let mut evaluations = 0usize;
    for (name, h) in &cases {
        let cert = decide_tree_arrangeable(h).map_err(|e| e.to_string())?;
        let (Some(bip), Some(tree)) = (cert.bipartition, cert.tree) else {
            return Err(format!("{name} is not tree-arrangeable"));
        };
        instances += 1;
        for (gname, g) in &targets {
            for eps in [ratio(1, 10), ratio(1, 7)] {
                let report = check_section2_identities(h, &bip.side_a, &tree, g, &eps).map_err(|e| e.to_string())?;
                ensure(report.all_pass, || {
                    format!("{name} on {gname} with eps {}: {:?}", format_rational(&eps), report.identities)
                })?;
                evaluations += 1;
            }
        }
    }
    ensure(instances >= 5, || "fewer than five instances".into())?;
    Ok(format!("{instances} instances, {evaluations} exact reports, all identities hold"))
}

fn criterion_5() -> Outcome {
    let mut hs: Vec<(String, Graph)> = Vec::new();
    for a in 2..=3 {
        for b in a..=4 {
            hs.push((format!("grid{a}x{b}"), named("grid", &[a, b]).unwrap()));
        }
    }
    hs.push(("Q3".into(), named("hypercube", &[3]).unwrap()));
    for n in 2..=6 {
        for (i, t) in graphs_up_to_iso(n).into_iter().filter(is_tree).enumerate() {
            hs.push((format!("tree{n}#{i}"), t));
        }
    }
    for n in [4, 6, 8] {
        hs.push((format!("C{n}"), named("cycle", &[n]).unwrap()));
    }
    for a in 1..=3 {
        for b in a..=3 {
            hs.push((format!("K{a},{b}"), complete_bipartite(a, b)));
        }
    }
    for (name, h) in &hs {
        let status = classify(name, h).map_err(|e| e.to_string())?.status;
        ensure(status != Status::Unknown, || format!("{name} classified unknown"))?;
    }
    let ps = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    let gs: Vec<Graph> = (0..200u64)
        .map(|s| random_gnp(2 + (s % 5) as usize, &ps[(s % 3) as usize], 5000 + s).unwrap())
        .collect();
    let mut min_margin: Option<Rational> = None;
    for (name, h) in &hs {
        for (i, g) in gs.iter().enumerate() {
            let v = sidorenko_check(h, g).map_err(|e| e.to_string())?;
            ensure(v.holds, || format!("violation: {name} on G #{i} margin {}", format_rational(&v.margin)))?;
            if min_margin.as_ref().is_none_or(|m| v.margin < *m) {
                min_margin = Some(v.margin);
            }
        }
    }
    for (i, g) in gs.iter().enumerate() {
        let v = sidorenko_check(&path(2), g).map_err(|e| e.to_string())?;
        ensure(v.margin == ratio(0, 1), || format!("K2 margin nonzero on G #{i}"))?;
    }
    Ok(format!(
        "{} certified H x 200 G hold, min margin {}; K2 margin 0 on all",
        hs.len(),
        format_rational(&min_margin.unwrap())
    ))
}

fn criterion_6() -> Outcome {
    ensure(is_isomorphic(&cartesian_product(&path(2), &path(2)).graph, &named("cycle", &[4]).unwrap()), || {
        "K2 x K2 is not C4".into()
    })?;
    for k in 1..=4 {
        ensure(is_isomorphic(&phi(&named("complete", &[k]).unwrap()), &complete_bipartite(k, k)), || {
            format!("phi(K{k}) is not K{k},{k}")
        })?;
    }
    ensure(is_isomorphic(&phi(&named("cycle", &[5]).unwrap()), &named("k55_minus_c10", &[]).unwrap()), || {
        "phi(C5) is not K5,5 - C10".into()
    })?;
    let ps = [ratio(1, 3), ratio(1, 2), ratio(3, 4)];
    for seed in 0..20u64 {
        let a = 1 + (seed % 3) as usize;
        let b = 1 + ((seed / 3) % 3) as usize;
        let h = random_bipartite(a, b, &ps[(seed % 3) as usize], 300 + seed).unwrap();
        ensure(is_isomorphic(&phi(&h), &cartesian_product(&path(2), &h).graph), || {
            format!("phi(H) differs from K2 x H for seed {seed}")
        })?;
    }
    for seed in 0..40u64 {
        let h = random_gnp(1 + (seed % 7) as usize, &ps[(seed % 3) as usize], 400 + seed).unwrap();
        let tau = 1 + (seed % 5) as usize;
        let trees = labeled_trees(&(0..tau).collect::<Vec<_>>());
        let t = Graph::from_edges(tau, trees[(seed as usize * 7) % trees.len()].iter().copied()).unwrap();
        let p = cartesian_product(&t, &h).graph;
        ensure(p.edge_count() == (tau - 1) * h.n() + tau * h.edge_count(), || {
            format!("product edge count wrong for seed {seed}")
        })?;
        ensure(phi(&h).edge_count() == 2 * h.edge_count() + h.n(), || format!("phi edge count wrong for seed {seed}"))?;
    }
    Ok("identities and edge-count formulas hold".into())
}

fn criterion_7() -> Outcome {
    let hs = [named("cycle", &[4]).unwrap(), path(4)];
    let ps = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 50 {
        let g = random_gnp(2 + (seed % 7) as usize, &ps[(seed % 3) as usize], 900 + seed).unwrap();
        seed += 1;
        if g.edge_count() == 0 {
            continue;
        }
        checked += 1;
        let s = degree_split(&g).map_err(|e| e.to_string())?;
        let gp = &s.graph;
        ensure(gp.edge_count() == g.edge_count(), || format!("edge count changed for seed {seed}"))?;
        ensure(gp.n() <= 2 * g.n(), || format!("too many vertices for seed {seed}"))?;
        ensure(gp.max_degree() * gp.n() <= 4 * gp.edge_count(), || {
            format!("max degree {} above 4|E'|/|V'| for seed {seed}", gp.max_degree())
        })?;
        for h in &hs {
            let (big, small) = (count_hom(h, &g), count_hom(h, gp));
            ensure(big >= small, || format!("|Hom(H,G)| {big} < |Hom(H,G')| {small} for seed {seed}"))?;
            let images: BTreeSet<Vec<usize>> = all_homs(h, gp)
                .into_iter()
                .map(|f| f.iter().map(|&x| s.origin[x]).collect())
                .collect();
            ensure(images.len().to_string() == small.to_string(), || "projection is not injective".into())?;
        }
    }
    Ok("50 graphs: edges kept, |V'| <= 2|V|, degree bound, hom counts shrink injectively".into())
}

fn criterion_8() -> Outcome {
    let hs = [
        ("K55-C10", named("k55_minus_c10", &[]).unwrap()),
        ("phi(C7)", phi(&named("cycle", &[7]).unwrap())),
    ];
    let mut min_margin: Option<Rational> = None;
    for seed in 0..500u64 {
        let n = 2 + (seed % 4) as usize;
        let p = ratio(1 + (seed % 9) as i64, 10);
        let g = random_gnp(n, &p, 7000 + seed).unwrap();
        for (name, h) in &hs {
            let v = sidorenko_check(h, &g).map_err(|e| e.to_string())?;
            if !v.holds {
                let bundle = serde_json::json!({
                    "h": name,
                    "h_graph6": write_graph6(h).unwrap(),
                    "g_graph6": write_graph6(&g).unwrap(),
                    "g_n": n,
                    "g_p": format_rational(&p),
                    "g_seed": 7000 + seed,
                    "lhs": v.lhs.to_string(),
                    "rhs": v.rhs.to_string(),
                    "margin": format_rational(&v.margin),
                });
                let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
                let file = dir.join(format!("violation-{}-{}.json", name.replace(['(', ')'], "_"), 7000 + seed));
                std::fs::write(&file, bundle.to_string()).map_err(|e| e.to_string())?;
                return Err(format!("VIOLATION {name} on seed {}; reproducer at {}", 7000 + seed, file.display()));
            }
            if min_margin.as_ref().is_none_or(|m| v.margin < *m) {
                min_margin = Some(v.margin);
            }
        }
    }
    Ok(format!(
        "1000 pairs, no violation (non-conclusive search), min margin {}",
        format_rational(&min_margin.unwrap())
    ))
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "product/psi hom bijection", 60, criterion_1),
        (2, "dynamic programming vs brute force", 120, criterion_2),
        (3, "spanning-tree decider vs exhaustive trees", 60, criterion_3),
        (4, "normalised-functional identities", 60, criterion_4),
        (5, "certified graphs never violate", 300, criterion_5),
        (6, "construction identities", 30, criterion_6),
        (7, "degree splitting", 60, criterion_7),
        (8, "open-case stress search", 300, criterion_8),
    ];
    let mut failures = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the {budget} s budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {id} [{verdict}] {title}: {detail} ({:.2} s of {budget} s)",
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
