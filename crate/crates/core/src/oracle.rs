//! Slow reference answers for tests: Floyd-Warshall all-pairs distances
//! and brute-force shortest simple paths. Nothing here shares code with
//! the engines.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub const DEFAULT_ORACLE_CAP: usize = 256;
pub const SIMPLE_PATH_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle cap is {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub source: Vertex,
    /// `dist[u][v]`, `None` where `v` is unreachable from `u`.
    pub dist: Vec<Vec<Option<f64>>>,
    /// Some vertex reachable from the source has a negative diagonal.
    pub has_reachable_negative_cycle: bool,
    /// Indices (into `g.edges()`) of edges on at least one shortest path
    /// from the source. Only meaningful without reachable negative cycles.
    pub sp_edges: Vec<usize>,
}

impl OracleResult {
    /// Row of `dist` for the source.
    pub fn from_source(&self) -> &[Option<f64>] {
        &self.dist[self.source]
    }
}

/// Floyd-Warshall with the default cap.
pub fn floyd_warshall(g: &Graph) -> Result<OracleResult, OracleError> {
    floyd_warshall_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn floyd_warshall_capped(g: &Graph, cap: usize) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let mut dist: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(0.0);
    }
    for e in g.edges() {
        let cell = &mut dist[e.tail][e.head];
        *cell = Some(match *cell {
            Some(d) => d.min(e.weight),
            None => e.weight,
        });
    }
    // row k is read while row i is written, and i may equal k
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = dist[k][j] else { continue };
                let via = dik + dkj;
                if dist[i][j].is_none_or(|d| via < d) {
                    dist[i][j] = Some(via);
                }
            }
        }
    }

    let s = g.source();
    let has_reachable_negative_cycle =
        (0..n).any(|u| dist[s][u].is_some() && dist[u][u].is_some_and(|d| d < 0.0));

    let sp_edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| match (dist[s][e.tail], dist[s][e.head]) {
            (Some(du), Some(dv)) => du + e.weight == dv,
            _ => false,
        })
        .map(|(i, _)| i)
        .collect();

    Ok(OracleResult {
        source: s,
        dist,
        has_reachable_negative_cycle,
        sp_edges,
    })
}

/// Length of the shortest simple path from the source to every vertex,
/// by enumerating all simple paths. `None` where no path exists.
pub fn shortest_simple_path_lengths(g: &Graph) -> Result<Vec<Option<f64>>, OracleError> {
    let n = g.vertex_count();
    if n > SIMPLE_PATH_CAP {
        return Err(OracleError::TooLarge {
            n,
            cap: SIMPLE_PATH_CAP,
        });
    }
    let mut best: Vec<Option<f64>> = vec![None; n];
    let mut on_path = vec![false; n];

    fn dfs(
        g: &Graph,
        u: Vertex,
        len: f64,
        on_path: &mut [bool],
        best: &mut [Option<f64>],
    ) {
        if best[u].is_none_or(|b| len < b) {
            best[u] = Some(len);
        }
        on_path[u] = true;
        for e in g.out_edges(u) {
            if !on_path[e.head] {
                dfs(g, e.head, len + e.weight, on_path, best);
            }
        }
        on_path[u] = false;
    }

    dfs(g, g.source(), 0.0, &mut on_path, &mut best);
    Ok(best)
}

/// All simple paths from the source to `target`, as vertex lists.
pub fn simple_paths_to(g: &Graph, target: Vertex) -> Result<Vec<Vec<Vertex>>, OracleError> {
    let n = g.vertex_count();
    if n > SIMPLE_PATH_CAP * 2 {
        return Err(OracleError::TooLarge {
            n,
            cap: SIMPLE_PATH_CAP * 2,
        });
    }
    let mut out = Vec::new();
    let mut path = vec![g.source()];
    let mut on_path = vec![false; n];
    on_path[g.source()] = true;

    fn dfs(
        g: &Graph,
        target: Vertex,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let u = *path.last().expect("path never empty");
        if u == target {
            out.push(path.clone());
            return;
        }
        for e in g.out_edges(u) {
            if !on_path[e.head] {
                on_path[e.head] = true;
                path.push(e.head);
                dfs(g, target, path, on_path, out);
                path.pop();
                on_path[e.head] = false;
            }
        }
    }

    dfs(g, target, &mut path, &mut on_path, &mut out);
    Ok(out)
}
