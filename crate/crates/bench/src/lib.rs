//! Fixed benchmark instances, shared by the criterion benches.

use bfrand_core::generators::{dense_worst_case_path, random_graph, worst_case_path, GeneratorSpec};
use bfrand_core::Graph;

/// Named instance for a bench group.
pub struct BenchInstance {
    pub name: String,
    pub graph: Graph,
}

/// Worst-case paths, a cycle-free sparse graph (n <= 256 for the filter) and a dense complete graph.
pub fn shortest_path_instances() -> Vec<BenchInstance> {
    let mut out = Vec::new();
    for n in [100, 1000] {
        out.push(BenchInstance { name: format!("path-{n}"), graph: worst_case_path(n).unwrap() });
    }
    let spec = GeneratorSpec::sparse(250, 2000).weights(-1, 100).seed(1).reachable(true).cycle_free(true);
    out.push(BenchInstance { name: "sparse-250x2000".into(), graph: random_graph(&spec).unwrap() });
    out.push(BenchInstance { name: "dense-path-100".into(), graph: dense_worst_case_path(100).unwrap() });
    out
}

/// Planted negative triangle in a 200-vertex sparse graph.
pub fn planted_cycle_instance() -> BenchInstance {
    let spec = GeneratorSpec::planted(200, Some(1200), 3, -1).weights(0, 20).seed(5).reachable(true);
    BenchInstance { name: "planted-200x1200".into(), graph: random_graph(&spec).unwrap() }
}
