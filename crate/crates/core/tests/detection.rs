use bfrand_core::engine::YenRun;
use bfrand_core::generators::{random_graph, GeneratorSpec};
use bfrand_core::negcycle::{DetectionSchedule, ParentGraph};
use bfrand_core::oracle::{floyd_warshall, shortest_simple_path_lengths};
use bfrand_core::*;
use proptest::prelude::*;

fn arb_small_graph() -> impl Strategy<Value = Graph> {
    (1usize..=6).prop_flat_map(|n| {
        (Just(n), 0..n, prop::collection::vec((0..n, 0..n, -3i64..=3), 0..=14)).prop_map(
            |(n, s, es)| {
                Graph::from_triples(n, s, es.into_iter().map(|(u, v, w)| (u, v, w as f64))).unwrap()
            },
        )
    })
}

fn assert_certificate(g: &Graph, verdict: &CycleVerdict) {
    let cycle = verdict.cycle.as_ref().expect("found implies a certificate");
    let mut sum = 0.0;
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        sum += g.min_edge_weight(u, v).expect("certificate step is a graph edge");
    }
    assert!(sum < 0.0, "certificate {cycle:?} weighs {sum}");
    assert_eq!(verdict.cycle_weight, Some(sum));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn detection_matches_oracle(g in arb_small_graph(), seed in any::<u64>(), every in any::<bool>()) {
        let opts = DetectionOptions { c: 2.0, check_every_iteration: every };
        let (_, stats, verdict) = run_with_detection(&g, seed, opts).unwrap();
        let oracle = floyd_warshall(&g).unwrap();
        prop_assert_eq!(verdict.found, oracle.has_reachable_negative_cycle);
        let cap = DetectionSchedule::new(g.vertex_count(), 2.0, false).unwrap().cap;
        prop_assert!(stats.iterations <= cap);
        if verdict.found {
            assert_certificate(&g, &verdict);
        } else {
            prop_assert_eq!(stats.negative_cycle, None);
        }
    }

    /// A tentative distance below the shortest simple path value forces a
    /// cycle in the parent graph, at every iteration boundary.
    #[test]
    fn below_simple_path_value_implies_parent_cycle(g in arb_small_graph(), seed in any::<u64>()) {
        let simple = shortest_simple_path_lengths(&g).unwrap();
        let mut run = YenRun::new(&g, random_ordering(&g, seed)).unwrap();
        for _ in 0..12 {
            let more = run.step();
            let below = run.state().distances().iter().zip(&simple).any(|(d, s)| match (d, s) {
                (Some(d), Some(s)) => d < s,
                _ => false,
            });
            if below {
                prop_assert!(detect_cycle_in_parent_graph(&ParentGraph::from_state(run.state())).is_some());
            }
            if !more {
                break;
            }
        }
    }
}

/// After the detection threshold's worth of iterations every tentative
/// distance is at most the shortest simple path length.
#[test]
fn distances_reach_simple_path_values_by_threshold() {
    let n = 6;
    let threshold = iteration_threshold(n, 2.0).unwrap();
    let mut checked = 0;
    for gseed in 0..40u64 {
        let spec = GeneratorSpec::sparse(n, 14).weights(-3, 5).seed(gseed).reachable(true);
        let g = random_graph(&spec).unwrap();
        let simple = shortest_simple_path_lengths(&g).unwrap();
        for seed in 0..200u64 {
            let mut run = YenRun::new(&g, random_ordering(&g, seed)).unwrap();
            while run.stats().iterations < threshold && run.step() {}
            for (v, (d, s)) in run.state().distances().iter().zip(&simple).enumerate() {
                if let Some(s) = s {
                    let d = d.expect("reachable vertex is reached by now");
                    assert!(d <= *s, "graph {gseed} seed {seed}: D[{v}] = {d} > D'[{v}] = {s}");
                }
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 8000);
}

#[test]
fn planted_triangles_always_detected() {
    for gseed in 0..60u64 {
        let spec = GeneratorSpec::planted(12, Some(30), 3, -1).weights(0, 10).seed(gseed);
        let g = random_graph(&spec).unwrap();
        assert!(floyd_warshall(&g).unwrap().has_reachable_negative_cycle);
        for seed in 0..20u64 {
            let (_, stats, v) = run_with_detection(&g, seed, DetectionOptions::default()).unwrap();
            assert!(v.found);
            assert!(stats.iterations <= 8);
            assert_certificate(&g, &v);
        }
    }
}

#[test]
fn monte_carlo_never_wrong_on_cycle_free_inputs() {
    for gseed in 0..30u64 {
        let spec = GeneratorSpec::sparse(10, 40).weights(-2, 8).seed(gseed).cycle_free(true);
        let g = random_graph(&spec).unwrap();
        let truth = floyd_warshall(&g).unwrap();
        let out = monte_carlo_dense_detect(&g, gseed, 2.0).unwrap();
        assert!(!out.verdict.found);
        assert_eq!(out.state.distances(), truth.from_source());
    }
}

#[test]
fn simple_path_oracle_on_two_cycle() {
    // a = 0, b = 1; D'[b] is the single simple path despite the cycle
    let g = Graph::from_triples(2, 0, [(0, 1, 1.0), (1, 0, -3.0)]).unwrap();
    assert_eq!(shortest_simple_path_lengths(&g).unwrap(), vec![Some(0.0), Some(1.0)]);
}
