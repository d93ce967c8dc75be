//! Instance generators: the single-path worst case, its alternating
//! adversarial ordering, seeded random graphs and planted negative cycles.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Ordering, Vertex};
use crate::oracle::{floyd_warshall, OracleError, DEFAULT_ORACLE_CAP};
use crate::rng::{shuffle, SeededRng};

/// Attempts made by generate-and-filter before giving up.
pub const FILTER_ATTEMPTS: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("inconsistent generator spec: {0}")]
    Inconsistent(String),
    #[error("no negative-cycle-free instance after {0} attempts")]
    FilterExhausted(u64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// `0 -> 1 -> ... -> n-1`, unit weights.
    PathWorstCase,
    /// Same graph as `PathWorstCase`; pair it with [`adversarial_ordering`].
    AlternatingAdversary,
    /// The worst-case path completed to a full digraph whose extra edges
    /// weigh `n`, too heavy to lie on any shortest path.
    DensePathWorstCase,
    /// `m` distinct random edges.
    RandomSparse,
    /// Every ordered pair `u != v`.
    RandomDense,
    /// A random graph (sparse if `m` is set, dense otherwise) plus a
    /// planted cycle reachable from the source.
    PlantedCycle,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::PathWorstCase,
        GeneratorKind::AlternatingAdversary,
        GeneratorKind::DensePathWorstCase,
        GeneratorKind::RandomSparse,
        GeneratorKind::RandomDense,
        GeneratorKind::PlantedCycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::PathWorstCase => "path-worst-case",
            GeneratorKind::AlternatingAdversary => "alternating-adversary",
            GeneratorKind::DensePathWorstCase => "dense-path-worst-case",
            GeneratorKind::RandomSparse => "random-sparse",
            GeneratorKind::RandomDense => "random-dense",
            GeneratorKind::PlantedCycle => "planted-cycle",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown generator kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Edge count for sparse kinds.
    pub m: Option<usize>,
    /// Inclusive integer weight range for random edges.
    pub weight_min: i64,
    pub weight_max: i64,
    pub seed: u64,
    /// Start from a zero-weight spanning arborescence rooted at the source
    /// (counted in `m`).
    pub ensure_reachable: bool,
    /// Resample until the oracle finds no reachable negative cycle.
    pub cycle_free: bool,
    pub cycle_len: usize,
    pub cycle_weight: i64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize) -> Self {
        Self {
            kind,
            n,
            m: None,
            weight_min: -3,
            weight_max: 7,
            seed: 0,
            ensure_reachable: false,
            cycle_free: false,
            cycle_len: 3,
            cycle_weight: -1,
        }
    }

    pub fn sparse(n: usize, m: usize) -> Self {
        Self {
            m: Some(m),
            ..Self::new(GeneratorKind::RandomSparse, n)
        }
    }

    pub fn dense(n: usize) -> Self {
        Self::new(GeneratorKind::RandomDense, n)
    }

    pub fn planted(n: usize, m: Option<usize>, cycle_len: usize, cycle_weight: i64) -> Self {
        Self {
            m,
            cycle_len,
            cycle_weight,
            ..Self::new(GeneratorKind::PlantedCycle, n)
        }
    }

    pub fn weights(mut self, lo: i64, hi: i64) -> Self {
        self.weight_min = lo;
        self.weight_max = hi;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn reachable(mut self, yes: bool) -> Self {
        self.ensure_reachable = yes;
        self
    }

    pub fn cycle_free(mut self, yes: bool) -> Self {
        self.cycle_free = yes;
        self
    }

    fn pair_count(&self) -> usize {
        self.n * self.n.saturating_sub(1)
    }

    fn edge_target(&self) -> usize {
        match self.kind {
            GeneratorKind::RandomSparse => self.m.unwrap_or(0),
            GeneratorKind::PlantedCycle => self.m.unwrap_or(self.pair_count()),
            _ => self.pair_count(),
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |msg: String| Err(GeneratorError::Inconsistent(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        match self.kind {
            GeneratorKind::PathWorstCase
            | GeneratorKind::AlternatingAdversary
            | GeneratorKind::DensePathWorstCase => {
                if self.n < 2 {
                    return bad(format!("{} needs n >= 2", self.kind));
                }
                return Ok(());
            }
            GeneratorKind::RandomSparse if self.m.is_none() => {
                return bad("random-sparse needs m".into());
            }
            _ => {}
        }
        if self.weight_min > self.weight_max {
            return bad(format!(
                "weight range {}..={} is empty",
                self.weight_min, self.weight_max
            ));
        }
        let m = self.edge_target();
        if m > self.pair_count() {
            return bad(format!(
                "m = {m} exceeds n(n-1) = {} for a simple digraph",
                self.pair_count()
            ));
        }
        if self.ensure_reachable && m < self.n - 1 {
            return bad(format!("reachability needs m >= n - 1 = {}", self.n - 1));
        }
        if self.kind == GeneratorKind::PlantedCycle {
            if self.cycle_len == 0 || self.cycle_len > self.n {
                return bad(format!("cycle length {} not in 1..={}", self.cycle_len, self.n));
            }
            if self.cycle_weight >= 0 {
                return bad("planted cycle weight must be negative".into());
            }
            if self.cycle_free {
                return bad("planted-cycle cannot be cycle-free".into());
            }
        }
        if self.cycle_free && self.n > DEFAULT_ORACLE_CAP {
            return bad(format!(
                "cycle-free filtering needs n <= {DEFAULT_ORACLE_CAP}"
            ));
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};n={}", self.kind, self.n)?;
        match self.kind {
            GeneratorKind::PathWorstCase
            | GeneratorKind::AlternatingAdversary
            | GeneratorKind::DensePathWorstCase => return Ok(()),
            _ => {}
        }
        if let Some(m) = self.m {
            write!(f, ";m={m}")?;
        }
        write!(
            f,
            ";w={}..{};seed={};reach={};cycle_free={}",
            self.weight_min, self.weight_max, self.seed, self.ensure_reachable as u8, self.cycle_free as u8
        )?;
        if self.kind == GeneratorKind::PlantedCycle {
            write!(f, ";cycle={}x{}", self.cycle_len, self.cycle_weight)?;
        }
        Ok(())
    }
}

/// `0 -> 1 -> ... -> n-1` with unit weights, source 0.
pub fn worst_case_path(n: usize) -> Result<Graph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::Inconsistent(format!(
            "worst-case path needs n >= 2, got {n}"
        )));
    }
    Ok(Graph::from_triples(n, 0, (0..n - 1).map(|i| (i, i + 1, 1.0)))?)
}

/// Complete digraph on the worst-case path: path edges weigh 1, every
/// other edge weighs `n`. Path edges come first.
pub fn dense_worst_case_path(n: usize) -> Result<Graph, GeneratorError> {
    let path = worst_case_path(n)?;
    let heavy = n as f64;
    let mut edges = path.edges().to_vec();
    for u in 0..n {
        for v in 0..n {
            if u != v && v != u + 1 {
                edges.push(Edge::new(u, v, heavy));
            }
        }
    }
    Ok(Graph::new(n, edges, 0)?)
}

/// Ranks for the worst-case path that alternate rising and falling edges.
///
/// Source gets rank 0; odd path positions take the highest ranks in
/// descending order, even positions take `1, 2, 3, ...` ascending.
pub fn adversarial_ordering(n: usize) -> Result<Ordering, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::Inconsistent(format!(
            "adversarial ordering needs n >= 2, got {n}"
        )));
    }
    let mut rank = vec![0usize; n];
    let mut high = n - 1;
    let mut low = 1;
    for (pos, r) in rank.iter_mut().enumerate().skip(1) {
        if pos % 2 == 1 {
            *r = high;
            high -= 1;
        } else {
            *r = low;
            low += 1;
        }
    }
    Ok(Ordering::from_ranks(rank, 0)?)
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GeneratorError> {
    spec.validate()?;
    match spec.kind {
        GeneratorKind::PathWorstCase | GeneratorKind::AlternatingAdversary => {
            worst_case_path(spec.n)
        }
        GeneratorKind::DensePathWorstCase => dense_worst_case_path(spec.n),
        _ => random_graph(spec),
    }
}

/// Seeded random graph; see [`GeneratorSpec`] for the knobs.
pub fn random_graph(spec: &GeneratorSpec) -> Result<Graph, GeneratorError> {
    spec.validate()?;
    if !spec.cycle_free {
        return draw(spec, &mut SeededRng::new(spec.seed));
    }
    for attempt in 0..FILTER_ATTEMPTS {
        let mut rng = SeededRng::with_stream(spec.seed, attempt);
        let g = draw(spec, &mut rng)?;
        if !floyd_warshall(&g)?.has_reachable_negative_cycle {
            return Ok(g);
        }
    }
    Err(GeneratorError::FilterExhausted(FILTER_ATTEMPTS))
}

fn draw(spec: &GeneratorSpec, rng: &mut SeededRng) -> Result<Graph, GeneratorError> {
    let n = spec.n;
    let s: Vertex = 0;
    let target = spec.edge_target();
    let mut edges: Vec<Edge> = Vec::with_capacity(target + spec.cycle_len + 1);
    let mut used: HashSet<(Vertex, Vertex)> = HashSet::new();

    if spec.ensure_reachable && n > 1 {
        let mut rest: Vec<Vertex> = (1..n).collect();
        shuffle(rng, &mut rest);
        for (i, &v) in rest.iter().enumerate() {
            let pick = rng.below(i as u64 + 1) as usize;
            let parent = if pick == 0 { s } else { rest[pick - 1] };
            edges.push(Edge::new(parent, v, 0.0));
            used.insert((parent, v));
        }
    }

    let remaining = target - edges.len();
    let weight = |rng: &mut SeededRng| rng.range_inclusive(spec.weight_min, spec.weight_max) as f64;
    let total = spec.pair_count();
    if remaining * 2 <= total - used.len() {
        while edges.len() < target {
            let u = rng.below(n as u64) as usize;
            let mut v = rng.below(n as u64 - 1) as usize;
            if v >= u {
                v += 1;
            }
            if used.insert((u, v)) {
                let w = weight(rng);
                edges.push(Edge::new(u, v, w));
            }
        }
    } else {
        let mut free: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .filter(|p| !used.contains(p))
            .collect();
        shuffle(rng, &mut free);
        for &(u, v) in free.iter().take(remaining) {
            let w = weight(rng);
            edges.push(Edge::new(u, v, w));
            used.insert((u, v));
        }
    }

    if spec.kind == GeneratorKind::PlantedCycle {
        plant_cycle(spec, rng, &mut edges);
    }
    Ok(Graph::new(n, edges, s)?)
}

/// Overwrites (or adds) the edges of a cycle of `spec.cycle_len` random
/// distinct vertices, with weights summing to `spec.cycle_weight`, and
/// makes it reachable from the source.
fn plant_cycle(spec: &GeneratorSpec, rng: &mut SeededRng, edges: &mut Vec<Edge>) {
    let n = spec.n;
    let len = spec.cycle_len;
    let mut verts: Vec<Vertex> = (0..n).collect();
    shuffle(rng, &mut verts);
    verts.truncate(len);

    let base = spec.cycle_weight.div_euclid(len as i64);
    let extra = spec.cycle_weight.rem_euclid(len as i64) as usize;
    let mut set_edge = |u: Vertex, v: Vertex, w: f64| {
        match edges.iter_mut().find(|e| e.tail == u && e.head == v) {
            Some(e) => e.weight = w,
            None => edges.push(Edge::new(u, v, w)),
        }
    };
    for i in 0..len {
        let w = base + i64::from(i < extra);
        set_edge(verts[i], verts[(i + 1) % len], w as f64);
    }
    if !spec.ensure_reachable && !verts.contains(&0) {
        let first = verts[0];
        set_edge(0, first, 0.0);
    }
}
