//! Shared inputs for the criterion benches.

use sidokit::construct::named;
use sidokit::rational::ratio;
use sidokit::random::random_gnp;
use sidokit::Graph;

/// `(label, H)` pairs covering trees, grids, cubes and the open case.
pub fn pattern_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("path5", named("path", &[5]).unwrap()),
        ("c6", named("cycle", &[6]).unwrap()),
        ("grid3x4", named("grid", &[3, 4]).unwrap()),
        ("q3", named("hypercube", &[3]).unwrap()),
        ("k55_minus_c10", named("k55_minus_c10", &[]).unwrap()),
    ]
}

pub fn target_graph(n: usize, seed: u64) -> Graph {
    random_gnp(n, &ratio(1, 2), seed).expect("p = 1/2 is valid")
}
