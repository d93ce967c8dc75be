//! Negative-cycle detection on top of the randomized engine.
//!
//! Two detectors live here:
//!
//! * [`run_with_detection`] checks the predecessor (parent) graph for a
//!   cycle once the run passes a probabilistic iteration threshold, and
//!   returns a verified cycle certificate.
//! * [`monte_carlo_dense_detect`] gives the engine a relaxation budget and
//!   declares a cycle when the budget runs out. A "no cycle" answer is
//!   always right; a "cycle" answer has no certificate.
//!
//! Only cycles reachable from the source are in scope. An unreachable
//! negative cycle never influences the tentative distances and is not
//! reported.
//!
//! For small `n` the probabilistic threshold exceeds the deterministic
//! bound from Yen's alternation argument: once every simple path from the
//! source has been relaxed in order (at most `ceil((n-1)/2)` iterations)
//! the next iteration must push some distance below its shortest simple
//! path value, which forces a parent-graph cycle. Checks therefore start
//! at `min(threshold, ceil((n-1)/2) + 1)`, and [`DetectionSchedule::fallback`]
//! records when the deterministic bound was the one that applied.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{RunStats, SsspState, YenRun};
use crate::graph::{random_ordering, Graph, GraphError, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectionError {
    #[error("iteration threshold needs n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("tail-bound constant c must be positive and finite, got {0}")]
    BadConstant(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("parent graph cycle {cycle:?} uses a missing edge {tail} -> {head}")]
    MissingEdge {
        cycle: Vec<Vertex>,
        tail: Vertex,
        head: Vertex,
    },
    #[error("parent graph cycle {cycle:?} has non-negative weight {weight}")]
    NonNegativeCertificate { cycle: Vec<Vertex>, weight: f64 },
    #[error("reached iteration cap {cap} with work left and no parent-graph cycle")]
    CapWithoutCycle { cap: u64 },
}

/// Functional graph `v -> P[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentGraph {
    parent: Vec<Option<Vertex>>,
}

impl ParentGraph {
    pub fn new(parent: Vec<Option<Vertex>>) -> Self {
        Self { parent }
    }

    pub fn from_state(state: &SsspState) -> Self {
        Self::new(state.predecessors().to_vec())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }
}

/// Finds a cycle in a parent graph by pointer chasing with three colors.
///
/// Linear in `n`. The cycle is returned in parent-pointer order
/// `[x, P[x], P[P[x]], ...]`.
pub fn detect_cycle_in_parent_graph(pg: &ParentGraph) -> Option<Vec<Vertex>> {
    #[derive(Clone, Copy, PartialEq, Eq)]
    enum Color {
        White,
        Grey,
        Black,
    }

    let n = pg.len();
    let mut color = vec![Color::White; n];
    let mut trail = Vec::new();
    for start in 0..n {
        if color[start] != Color::White {
            continue;
        }
        trail.clear();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match color[v] {
                Color::White => {
                    color[v] = Color::Grey;
                    trail.push(v);
                    cur = pg.parent[v];
                }
                Color::Grey => {
                    let at = trail.iter().position(|&x| x == v).expect("grey vertex is on trail");
                    return Some(trail[at..].to_vec());
                }
                Color::Black => break,
            }
        }
        for &v in &trail {
            color[v] = Color::Black;
        }
    }
    None
}

fn check_constant(c: f64) -> Result<(), DetectionError> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(DetectionError::BadConstant(c))
    }
}

/// `ceil(n/3 + 2 + sqrt(2 c n ln n))`: iterations after which a reachable
/// negative cycle shows up in the parent graph with probability at least
/// `1 - 1/n^(c-1)`.
pub fn iteration_threshold(n: usize, c: f64) -> Result<u64, DetectionError> {
    if n < 2 {
        return Err(DetectionError::TooFewVertices(n));
    }
    check_constant(c)?;
    let nf = n as f64;
    Ok((nf / 3.0 + 2.0 + (2.0 * c * nf * nf.ln()).sqrt()).ceil() as u64)
}

/// When detection checks run and when the run gives up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionSchedule {
    /// Probabilistic threshold; `None` for single-vertex graphs.
    pub threshold: Option<u64>,
    /// `ceil((n-1)/2) + 1`: by the end of this iteration a reachable
    /// negative cycle is always visible in the parent graph.
    pub guaranteed_by: u64,
    /// First iteration after which the parent graph is checked.
    pub first_check: u64,
    /// `ceil(n/2) + 2`; no run goes past this.
    pub cap: u64,
    /// The threshold exceeded `n/2 + 2`, so the deterministic bound set
    /// `first_check`.
    pub fallback: bool,
}

impl DetectionSchedule {
    pub fn new(n: usize, c: f64, check_every_iteration: bool) -> Result<Self, DetectionError> {
        check_constant(c)?;
        let threshold = if n >= 2 {
            Some(iteration_threshold(n, c)?)
        } else {
            None
        };
        let guaranteed_by = (n.saturating_sub(1)).div_ceil(2) as u64 + 1;
        let cap = n.div_ceil(2) as u64 + 2;
        let fallback = match threshold {
            Some(t) => t as f64 > n as f64 / 2.0 + 2.0,
            None => true,
        };
        let first_check = if check_every_iteration {
            1
        } else {
            threshold.map_or(guaranteed_by, |t| t.min(guaranteed_by))
        };
        Ok(Self {
            threshold,
            guaranteed_by,
            first_check,
            cap,
            fallback,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionOptions {
    /// Tail-bound constant.
    pub c: f64,
    /// Check the parent graph after every iteration, not just past the
    /// threshold.
    pub check_every_iteration: bool,
}

impl Default for DetectionOptions {
    fn default() -> Self {
        Self {
            c: 2.0,
            check_every_iteration: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub found: bool,
    /// Closed walk in the input graph: each consecutive pair, and the
    /// last-to-first pair, is an edge.
    pub cycle: Option<Vec<Vertex>>,
    pub cycle_weight: Option<f64>,
    /// Iteration after which the cycle was seen.
    pub detected_at: Option<u64>,
    pub iterations_used: u64,
    pub relax_calls_used: u64,
}

impl CycleVerdict {
    fn none(stats: &RunStats) -> Self {
        Self {
            found: false,
            cycle: None,
            cycle_weight: None,
            detected_at: None,
            iterations_used: stats.iterations,
            relax_calls_used: stats.relax_calls,
        }
    }
}

/// Turns a parent-graph cycle into a walk in `g` and checks it is negative.
///
/// Each step uses the lightest parallel edge between the pair.
pub fn certify_cycle(
    g: &Graph,
    parent_cycle: &[Vertex],
) -> Result<(Vec<Vertex>, f64), DetectionError> {
    let walk: Vec<Vertex> = parent_cycle.iter().rev().copied().collect();
    let mut weight = 0.0;
    for i in 0..walk.len() {
        let (tail, head) = (walk[i], walk[(i + 1) % walk.len()]);
        match g.min_edge_weight(tail, head) {
            Some(w) => weight += w,
            None => {
                return Err(DetectionError::MissingEdge {
                    cycle: walk,
                    tail,
                    head,
                })
            }
        }
    }
    if weight < 0.0 {
        Ok((walk, weight))
    } else {
        Err(DetectionError::NonNegativeCertificate {
            cycle: walk,
            weight,
        })
    }
}

/// Randomized engine with parent-graph cycle checks.
///
/// Returns the state at the point the run stopped. `found = false` means
/// the changed set emptied, so no negative cycle is reachable.
pub fn run_with_detection(
    g: &Graph,
    seed: u64,
    opts: DetectionOptions,
) -> Result<(SsspState, RunStats, CycleVerdict), DetectionError> {
    let schedule = DetectionSchedule::new(g.vertex_count(), opts.c, opts.check_every_iteration)?;
    let mut run = YenRun::new(g, random_ordering(g, seed))?;
    loop {
        let more = run.step();
        let it = run.stats().iterations;
        if !more {
            let verdict = CycleVerdict::none(run.stats());
            let (state, stats, _) = run.into_parts();
            return Ok((state, stats, verdict));
        }
        if it >= schedule.first_check {
            if let Some(pc) = detect_cycle_in_parent_graph(&ParentGraph::from_state(run.state())) {
                let (cycle, weight) = certify_cycle(g, &pc)?;
                run.stats_mut().negative_cycle = Some(cycle.clone());
                let stats = run.stats().clone();
                let verdict = CycleVerdict {
                    found: true,
                    cycle: Some(cycle),
                    cycle_weight: Some(weight),
                    detected_at: Some(it),
                    iterations_used: stats.iterations,
                    relax_calls_used: stats.relax_calls,
                };
                let (state, stats, _) = run.into_parts();
                return Ok((state, stats, verdict));
            }
        }
        if it >= schedule.cap {
            return Err(DetectionError::CapWithoutCycle { cap: schedule.cap });
        }
    }
}

/// `n^3/6 + sqrt(2) n^(5/2) sqrt(c ln n)` relaxations.
pub fn dense_relaxation_budget(n: usize, c: f64) -> f64 {
    let nf = n as f64;
    nf.powi(3) / 6.0 + 2f64.sqrt() * nf.powf(2.5) * (c * nf.ln()).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOutcome {
    pub verdict: CycleVerdict,
    pub budget: f64,
    pub state: SsspState,
    pub stats: RunStats,
}

/// Monte Carlo negative-cycle test for dense graphs.
///
/// Runs the randomized engine until it terminates or its relaxation count
/// passes [`dense_relaxation_budget`]; the budget is checked after each
/// iteration.
pub fn monte_carlo_dense_detect(
    g: &Graph,
    seed: u64,
    c: f64,
) -> Result<MonteCarloOutcome, DetectionError> {
    check_constant(c)?;
    let budget = dense_relaxation_budget(g.vertex_count(), c);
    let mut run = YenRun::new(g, random_ordering(g, seed))?;
    let found = loop {
        let more = run.step();
        if run.stats().relax_calls as f64 > budget {
            break true;
        }
        if !more {
            break false;
        }
    };
    let mut verdict = CycleVerdict::none(run.stats());
    verdict.found = found;
    let (state, stats, _) = run.into_parts();
    Ok(MonteCarloOutcome {
        verdict,
        budget,
        state,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_randomized;

    #[test]
    fn parent_graph_path_has_no_cycle() {
        let pg = ParentGraph::new(vec![None, Some(0), Some(1)]);
        assert_eq!(detect_cycle_in_parent_graph(&pg), None);
    }

    #[test]
    fn parent_graph_two_cycle() {
        let pg = ParentGraph::new(vec![None, Some(2), Some(1)]);
        assert_eq!(detect_cycle_in_parent_graph(&pg), Some(vec![1, 2]));
    }

    #[test]
    fn parent_graph_empty_and_self_loop() {
        assert_eq!(detect_cycle_in_parent_graph(&ParentGraph::new(vec![None; 4])), None);
        let pg = ParentGraph::new(vec![None, Some(1)]);
        assert_eq!(detect_cycle_in_parent_graph(&pg), Some(vec![1]));
    }

    #[test]
    fn parent_graph_tail_into_cycle() {
        // 0 -> 1 -> 2 -> 3 -> 1
        let pg = ParentGraph::new(vec![Some(1), Some(2), Some(3), Some(1)]);
        assert_eq!(detect_cycle_in_parent_graph(&pg), Some(vec![1, 2, 3]));
    }

    #[test]
    fn threshold_values() {
        assert_eq!(iteration_threshold(2, 1e-12).unwrap(), 3);
        let expected = (9.0 + 2.0 + (54.0f64 * 27f64.ln()).sqrt()).ceil() as u64;
        assert_eq!(iteration_threshold(27, 1.0).unwrap(), expected);
        assert_eq!(expected, 25);
        assert_eq!(iteration_threshold(1, 1.0), Err(DetectionError::TooFewVertices(1)));
        assert!(matches!(iteration_threshold(5, 0.0), Err(DetectionError::BadConstant(_))));
        assert!(matches!(iteration_threshold(5, f64::NAN), Err(DetectionError::BadConstant(_))));
    }

    #[test]
    fn schedule_falls_back_at_small_n() {
        let s = DetectionSchedule::new(12, 2.0, false).unwrap();
        assert_eq!(s.threshold, Some(17));
        assert!(s.fallback);
        assert_eq!(s.guaranteed_by, 7);
        assert_eq!(s.first_check, 7);
        assert_eq!(s.cap, 8);

        // large enough n for the probabilistic threshold to win
        let s = DetectionSchedule::new(20_000, 2.0, false).unwrap();
        assert!(!s.fallback);
        assert_eq!(s.first_check, s.threshold.unwrap());

        assert_eq!(DetectionSchedule::new(12, 2.0, true).unwrap().first_check, 1);
    }

    #[test]
    fn detects_two_vertex_cycle() {
        // a=0 -> b=1 weight 1, b -> a weight -3
        let g = Graph::from_triples(2, 0, [(0, 1, 1.0), (1, 0, -3.0)]).unwrap();
        for seed in 0..8 {
            let (_, stats, v) = run_with_detection(&g, seed, DetectionOptions::default()).unwrap();
            assert!(v.found);
            assert_eq!(v.cycle_weight, Some(-2.0));
            assert_eq!(stats.negative_cycle, v.cycle);
            let cyc = v.cycle.unwrap();
            assert_eq!(cyc.len(), 2);
        }
    }

    #[test]
    fn negative_self_loop_detected() {
        let g = Graph::from_triples(3, 0, [(0, 1, 2.0), (1, 1, -1.0), (1, 2, 0.0)]).unwrap();
        let (_, _, v) = run_with_detection(&g, 3, DetectionOptions::default()).unwrap();
        assert!(v.found);
        assert_eq!(v.cycle, Some(vec![1]));
        assert_eq!(v.cycle_weight, Some(-1.0));

        let single = Graph::from_triples(1, 0, [(0, 0, -1.0)]).unwrap();
        let (_, _, v) = run_with_detection(&single, 0, DetectionOptions::default()).unwrap();
        assert!(v.found);
    }

    #[test]
    fn unreachable_cycle_not_reported() {
        let g = Graph::from_triples(3, 0, [(1, 2, -1.0), (2, 1, -1.0)]).unwrap();
        let (_, _, v) = run_with_detection(&g, 0, DetectionOptions::default()).unwrap();
        assert!(!v.found);
    }

    #[test]
    fn cycle_free_matches_randomized() {
        let g = Graph::from_triples(
            4,
            0,
            [(0, 1, 3.0), (0, 2, 1.0), (2, 1, -1.0), (1, 3, 2.0), (3, 2, 4.0)],
        )
        .unwrap();
        for seed in 0..10 {
            let (st, stats, v) = run_with_detection(&g, seed, DetectionOptions::default()).unwrap();
            let (st2, stats2, _) = run_randomized(&g, seed);
            assert!(!v.found);
            assert_eq!(st.distances(), st2.distances());
            assert_eq!(stats.relax_calls, stats2.relax_calls);
        }
    }

    #[test]
    fn certificate_uses_lightest_parallel_edge() {
        let g = Graph::from_triples(2, 0, [(0, 1, 5.0), (0, 1, 1.0), (1, 0, -2.0)]).unwrap();
        // parent order [0, 1]: P[0] = 1, P[1] = 0
        let (walk, w) = certify_cycle(&g, &[0, 1]).unwrap();
        assert_eq!(walk, vec![1, 0]);
        assert_eq!(w, -1.0);
        assert!(matches!(
            certify_cycle(&Graph::from_triples(2, 0, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap(), &[0, 1]),
            Err(DetectionError::NonNegativeCertificate { .. })
        ));
        assert!(matches!(
            certify_cycle(&Graph::from_triples(2, 0, [(0, 1, 1.0)]).unwrap(), &[0, 1]),
            Err(DetectionError::MissingEdge { .. })
        ));
    }

    #[test]
    fn monte_carlo_verdicts() {
        let ok = Graph::from_triples(3, 0, [(0, 1, 1.0), (1, 2, -1.0), (0, 2, 4.0)]).unwrap();
        let out = monte_carlo_dense_detect(&ok, 5, 2.0).unwrap();
        assert!(!out.verdict.found);
        assert_eq!(out.state.distance(2), Some(0.0));

        let bad = Graph::from_triples(2, 0, [(0, 1, 1.0), (1, 0, -3.0)]).unwrap();
        let out = monte_carlo_dense_detect(&bad, 5, 2.0).unwrap();
        assert!(out.verdict.found);
        assert!(out.verdict.cycle.is_none());
        assert!(out.stats.relax_calls as f64 > out.budget);
    }

    #[test]
    fn dense_budget_formula() {
        let b = dense_relaxation_budget(30, 2.0);
        let expected = 27000.0 / 6.0 + 2f64.sqrt() * 30f64.powf(2.5) * (2.0 * 30f64.ln()).sqrt();
        assert_eq!(b, expected);
    }
}
