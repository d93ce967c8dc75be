//! Instrumented single-source shortest paths with negative weights.
//!
//! The Bellman-Ford family lives in [`engine`]: the basic `n - 1` pass
//! algorithm, the adaptive changed-set variant, Yen's rising/falling pass
//! variant under any vertex ordering, and the randomized variant that draws
//! that ordering uniformly. Every engine counts relax calls, improvements
//! and outer iterations exactly.
//!
//! [`negcycle`] adds parent-graph cycle detection and a Monte Carlo
//! relaxation-budget test; [`oracle`] holds slow reference answers;
//! [`generators`] builds worst-case, random and planted-cycle instances;
//! [`permstats`] counts local minima of rank sequences; [`dimacs`] and
//! [`trials`] drive batches of seeded runs and write their statistics.

pub mod dimacs;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod negcycle;
pub mod oracle;
pub mod permstats;
pub mod rng;
pub mod trials;

pub use engine::{
    run_adaptive, run_basic, run_randomized, run_yen, Algorithm, CountMode, RunStats, SsspState,
};
pub use graph::{partition_edges, random_ordering, Edge, EdgePartition, Graph, GraphError, Ordering, Vertex};
pub use negcycle::{
    detect_cycle_in_parent_graph, iteration_threshold, monte_carlo_dense_detect, run_with_detection,
    CycleVerdict, DetectionOptions, ParentGraph,
};
pub use oracle::{floyd_warshall, shortest_simple_path_lengths, OracleResult};
