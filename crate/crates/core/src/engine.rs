//! Bellman-Ford engines: basic, adaptive, Yen's two-pass variant and the
//! randomized-ordering variant, all sharing one instrumented `relax`.
//!
//! Each engine is available both as a one-shot `run_*` function and as a
//! stepper (`BasicRun`, `AdaptiveRun`, `YenRun`) that advances one outer
//! iteration at a time, so callers can inspect state between iterations
//! or stop on their own budget.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{partition_edges, random_ordering, EdgePartition, Graph, GraphError, Ordering, Vertex};

/// Tentative distances and predecessors plus the changed-vertex sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SsspState {
    source: Vertex,
    dist: Vec<Option<f64>>,
    pred: Vec<Option<Vertex>>,
    /// C: vertices whose distance changed in the previous iteration.
    active: Vec<Vertex>,
    in_active: Vec<bool>,
    /// Vertices whose distance changed during the current iteration.
    changed: Vec<bool>,
}

impl SsspState {
    /// `D[s] = 0`, everything else unreached, `C = {s}`.
    pub fn new(n: usize, source: Vertex) -> Self {
        let mut dist = vec![None; n];
        dist[source] = Some(0.0);
        let mut in_active = vec![false; n];
        in_active[source] = true;
        Self {
            source,
            dist,
            pred: vec![None; n],
            active: vec![source],
            in_active,
            changed: vec![false; n],
        }
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn distance(&self, v: Vertex) -> Option<f64> {
        self.dist[v]
    }

    pub fn distances(&self) -> &[Option<f64>] {
        &self.dist
    }

    pub fn predecessor(&self, v: Vertex) -> Option<Vertex> {
        self.pred[v]
    }

    pub fn predecessors(&self) -> &[Option<Vertex>] {
        &self.pred
    }

    /// The changed set carried into the next iteration.
    pub fn active(&self) -> &[Vertex] {
        &self.active
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.in_active[v]
    }

    pub fn changed_this_iteration(&self, v: Vertex) -> bool {
        self.changed[v]
    }

    /// Relaxes the edge `u -> v` of weight `w`.
    ///
    /// `u` must be reached. Ties do not count as improvements.
    pub fn relax(&mut self, stats: &mut RunStats, u: Vertex, v: Vertex, w: f64) -> bool {
        stats.relax_calls += 1;
        let Some(du) = self.dist[u] else {
            debug_assert!(false, "relax called with unreached tail {u}");
            return false;
        };
        let candidate = du + w;
        let improves = match self.dist[v] {
            None => true,
            Some(dv) => dv > candidate,
        };
        if improves {
            self.dist[v] = Some(candidate);
            self.pred[v] = Some(u);
            self.changed[v] = true;
            stats.improvements += 1;
        }
        improves
    }

    fn begin_iteration(&mut self) {
        self.changed.iter_mut().for_each(|c| *c = false);
    }

    /// Rebuilds C from this iteration's changes; true if C is non-empty.
    fn end_iteration(&mut self) -> bool {
        for &v in &self.active {
            self.in_active[v] = false;
        }
        self.active.clear();
        for (v, &c) in self.changed.iter().enumerate() {
            if c {
                self.active.push(v);
                self.in_active[v] = true;
            }
        }
        !self.active.is_empty()
    }

    /// Follows predecessor pointers from `v` back to the source.
    ///
    /// Returns `None` for unreached vertices or when the pointers loop.
    pub fn path_to(&self, v: Vertex) -> Option<Vec<Vertex>> {
        self.dist[v]?;
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.source {
            cur = self.pred[cur]?;
            path.push(cur);
            if path.len() > self.dist.len() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

/// Counters for one engine run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub relax_calls: u64,
    /// Relax calls that lowered a distance.
    pub improvements: u64,
    /// Outer-loop executions (passes, for the basic engine).
    pub iterations: u64,
    /// The changed set emptied before any cap was reached.
    pub terminated_early: bool,
    /// The engine stopped at its iteration cap with work remaining; on a
    /// well-formed input this means a negative cycle slipped through.
    pub cap_hit: bool,
    /// Cycle certificate, filled only by detection-enabled runs.
    pub negative_cycle: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Basic,
    Adaptive,
    Yen,
    Randomized,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Basic,
        Algorithm::Adaptive,
        Algorithm::Yen,
        Algorithm::Randomized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Adaptive => "adaptive",
            Algorithm::Yen => "yen",
            Algorithm::Randomized => "randomized",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// How the basic engine treats edges out of unreached vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    /// Skip them without counting.
    #[default]
    SkipUnreached,
    /// Count every edge in every pass, so `relax_calls = m(n-1)` exactly.
    Strict,
}

/// Outer-iteration cap for the adaptive and Yen engines.
pub fn iteration_cap(n: usize) -> u64 {
    n as u64 + 1
}

/// Fixed `n - 1` passes over every edge.
pub struct BasicRun<'g> {
    graph: &'g Graph,
    mode: CountMode,
    state: SsspState,
    stats: RunStats,
}

impl<'g> BasicRun<'g> {
    pub fn new(graph: &'g Graph, mode: CountMode) -> Self {
        Self {
            graph,
            mode,
            state: SsspState::new(graph.vertex_count(), graph.source()),
            stats: RunStats::default(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.stats.iterations + 1 >= self.graph.vertex_count() as u64
    }

    /// One full pass. Returns false once all `n - 1` passes are done.
    pub fn step(&mut self) -> bool {
        if self.is_done() {
            return false;
        }
        self.stats.iterations += 1;
        self.state.begin_iteration();
        for e in self.graph.edges() {
            if self.state.dist[e.tail].is_some() {
                self.state.relax(&mut self.stats, e.tail, e.head, e.weight);
            } else if self.mode == CountMode::Strict {
                self.stats.relax_calls += 1;
            }
        }
        self.state.end_iteration();
        !self.is_done()
    }

    pub fn state(&self) -> &SsspState {
        &self.state
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn finish(mut self) -> (SsspState, RunStats) {
        while self.step() {}
        (self.state, self.stats)
    }
}

/// Basic Bellman-Ford: `n - 1` passes regardless of progress.
pub fn run_basic(g: &Graph, mode: CountMode) -> (SsspState, RunStats) {
    BasicRun::new(g, mode).finish()
}

/// Adaptive Bellman-Ford: relaxes out-edges of the changed set only.
pub struct AdaptiveRun<'g> {
    graph: &'g Graph,
    state: SsspState,
    stats: RunStats,
    scratch: Vec<Vertex>,
}

impl<'g> AdaptiveRun<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            state: SsspState::new(graph.vertex_count(), graph.source()),
            stats: RunStats::default(),
            scratch: Vec::new(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.state.active.is_empty()
    }

    /// One outer iteration. Returns true while the changed set is non-empty.
    pub fn step(&mut self) -> bool {
        if self.is_done() {
            return false;
        }
        self.stats.iterations += 1;
        self.state.begin_iteration();
        // C is ascending by vertex index
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.state.active);
        for &u in &self.scratch {
            for e in self.graph.out_edges(u) {
                self.state.relax(&mut self.stats, u, e.head, e.weight);
            }
        }
        let more = self.state.end_iteration();
        if !more {
            self.stats.terminated_early = true;
        }
        more
    }

    pub fn state(&self) -> &SsspState {
        &self.state
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// Runs to convergence or to `cap` iterations.
    pub fn finish_with_cap(mut self, cap: u64) -> (SsspState, RunStats) {
        while self.step() {
            if self.stats.iterations >= cap {
                self.stats.cap_hit = true;
                break;
            }
        }
        (self.state, self.stats)
    }
}

/// Adaptive Bellman-Ford with early termination, capped at `n + 1`
/// iterations.
pub fn run_adaptive(g: &Graph) -> (SsspState, RunStats) {
    AdaptiveRun::new(g).finish_with_cap(iteration_cap(g.vertex_count()))
}

/// Yen's variant: per iteration, one rising pass in ascending rank then one
/// falling pass in descending rank.
///
/// A vertex's out-edges are scanned in a pass when it is in C or its own
/// distance already changed earlier in this iteration; updates from the
/// rising pass are visible to the falling pass. Self-loops are relaxed in
/// the rising pass so negative loops reach the parent graph.
pub struct YenRun<'g> {
    graph: &'g Graph,
    ordering: Ordering,
    partition: EdgePartition,
    state: SsspState,
    stats: RunStats,
}

impl<'g> YenRun<'g> {
    pub fn new(graph: &'g Graph, ordering: Ordering) -> Result<Self, GraphError> {
        ordering.validate_for(graph)?;
        let partition = partition_edges(graph, &ordering);
        Ok(Self {
            graph,
            ordering,
            partition,
            state: SsspState::new(graph.vertex_count(), graph.source()),
            stats: RunStats::default(),
        })
    }

    pub fn is_done(&self) -> bool {
        self.state.active.is_empty()
    }

    fn scans(&self, u: Vertex) -> bool {
        self.state.in_active[u] || self.state.changed[u]
    }

    /// One outer iteration. Returns true while the changed set is non-empty.
    pub fn step(&mut self) -> bool {
        if self.is_done() {
            return false;
        }
        self.stats.iterations += 1;
        self.state.begin_iteration();
        let n = self.graph.vertex_count();

        for r in 0..n {
            let u = self.ordering.order()[r];
            if !self.scans(u) {
                continue;
            }
            for e in self.partition.loops_at_rank(r) {
                self.state.relax(&mut self.stats, u, e.head, e.weight);
            }
            for e in self.partition.plus_at_rank(r) {
                self.state.relax(&mut self.stats, u, e.head, e.weight);
            }
        }
        for r in (0..n).rev() {
            let u = self.ordering.order()[r];
            if !self.scans(u) {
                continue;
            }
            for e in self.partition.minus_at_rank(r) {
                self.state.relax(&mut self.stats, u, e.head, e.weight);
            }
        }

        let more = self.state.end_iteration();
        if !more {
            self.stats.terminated_early = true;
        }
        more
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn partition(&self) -> &EdgePartition {
        &self.partition
    }

    pub fn state(&self) -> &SsspState {
        &self.state
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub(crate) fn stats_mut(&mut self) -> &mut RunStats {
        &mut self.stats
    }

    pub fn finish_with_cap(mut self, cap: u64) -> (SsspState, RunStats, Ordering) {
        while self.step() {
            if self.stats.iterations >= cap {
                self.stats.cap_hit = true;
                break;
            }
        }
        (self.state, self.stats, self.ordering)
    }

    pub fn into_parts(self) -> (SsspState, RunStats, Ordering) {
        (self.state, self.stats, self.ordering)
    }
}

/// Yen's algorithm under a caller-chosen ordering, capped at `n + 1`
/// iterations.
pub fn run_yen(g: &Graph, ord: &Ordering) -> Result<(SsspState, RunStats), GraphError> {
    let (state, stats, _) =
        YenRun::new(g, ord.clone())?.finish_with_cap(iteration_cap(g.vertex_count()));
    Ok((state, stats))
}

/// Yen's algorithm under `random_ordering(g, seed)`; returns the ordering
/// used.
pub fn run_randomized(g: &Graph, seed: u64) -> (SsspState, RunStats, Ordering) {
    let ord = random_ordering(g, seed);
    YenRun::new(g, ord)
        .expect("random ordering always fits its graph")
        .finish_with_cap(iteration_cap(g.vertex_count()))
}
