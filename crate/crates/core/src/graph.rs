//! Directed weighted multigraphs, vertex orderings and the rising/falling
//! edge partition used by Yen-style passes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{shuffle, SeededRng};

/// Dense vertex index in `[0, n)`.
pub type Vertex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: Vertex,
    pub head: Vertex,
    pub weight: f64,
}

impl Edge {
    pub fn new(tail: Vertex, head: Vertex, weight: f64) -> Self {
        Self { tail, head, weight }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("source {vertex} out of range for {n} vertices")]
    SourceOutOfRange { vertex: Vertex, n: usize },
    #[error("edge #{index} ({tail} -> {head}) has an endpoint outside [0, {n})")]
    EndpointOutOfRange {
        index: usize,
        tail: Vertex,
        head: Vertex,
        n: usize,
    },
    #[error("edge #{index} has non-finite weight {weight}")]
    NonFiniteWeight { index: usize, weight: f64 },
    #[error("ordering has length {len}, expected {n}")]
    OrderingLength { len: usize, n: usize },
    #[error("ordering is not a permutation (rank {rank} repeated or out of range)")]
    NotAPermutation { rank: usize },
    #[error("source {vertex} has rank {rank}, expected 0")]
    SourceNotFirst { vertex: Vertex, rank: usize },
}

/// A directed weighted multigraph with a designated source.
///
/// Parallel edges and self-loops are allowed. Out-edges are indexed
/// once at construction so engines can scan them without rebuilding.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    source: Vertex,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
    out_edges: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>, source: Vertex) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if source >= n {
            return Err(GraphError::SourceOutOfRange { vertex: source, n });
        }
        for (index, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(GraphError::EndpointOutOfRange {
                    index,
                    tail: e.tail,
                    head: e.head,
                    n,
                });
            }
            if !e.weight.is_finite() {
                return Err(GraphError::NonFiniteWeight {
                    index,
                    weight: e.weight,
                });
            }
        }

        let mut out_start = vec![0usize; n + 1];
        for e in &edges {
            out_start[e.tail + 1] += 1;
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }
        let mut fill = out_start.clone();
        let mut out_edges = vec![0usize; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[fill[e.tail]] = i;
            fill[e.tail] += 1;
        }

        Ok(Self {
            n,
            source,
            edges,
            out_start,
            out_edges,
        })
    }

    /// Builds a graph from `(tail, head, weight)` triples.
    pub fn from_triples(
        n: usize,
        source: Vertex,
        triples: impl IntoIterator<Item = (Vertex, Vertex, f64)>,
    ) -> Result<Self, GraphError> {
        let edges = triples
            .into_iter()
            .map(|(u, v, w)| Edge::new(u, v, w))
            .collect();
        Self::new(n, edges, source)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Same vertices and edges, different source.
    pub fn with_source(&self, source: Vertex) -> Result<Self, GraphError> {
        if source >= self.n {
            return Err(GraphError::SourceOutOfRange { vertex: source, n: self.n });
        }
        let mut g = self.clone();
        g.source = source;
        Ok(g)
    }

    /// Out-edges of `u` in input order.
    pub fn out_edges(&self, u: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.out_edges[self.out_start[u]..self.out_start[u + 1]]
            .iter()
            .map(move |&i| &self.edges[i])
    }

    /// Minimum weight over all parallel edges `tail -> head`, if any exist.
    pub fn min_edge_weight(&self, tail: Vertex, head: Vertex) -> Option<f64> {
        self.out_edges(tail)
            .filter(|e| e.head == head)
            .map(|e| e.weight)
            .reduce(f64::min)
    }
}

/// A numbering of the vertices with the source first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ordering {
    rank: Vec<usize>,
    order: Vec<Vertex>,
}

impl Ordering {
    /// Builds an ordering from `rank[v]` for every vertex.
    pub fn from_ranks(rank: Vec<usize>, source: Vertex) -> Result<Self, GraphError> {
        let n = rank.len();
        let mut order = vec![usize::MAX; n];
        for (v, &r) in rank.iter().enumerate() {
            if r >= n || order[r] != usize::MAX {
                return Err(GraphError::NotAPermutation { rank: r });
            }
            order[r] = v;
        }
        if source >= n {
            return Err(GraphError::SourceOutOfRange { vertex: source, n });
        }
        if rank[source] != 0 {
            return Err(GraphError::SourceNotFirst {
                vertex: source,
                rank: rank[source],
            });
        }
        Ok(Self { rank, order })
    }

    /// Builds an ordering from the vertex sequence in rank order.
    pub fn from_order(order: Vec<Vertex>, source: Vertex) -> Result<Self, GraphError> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(GraphError::NotAPermutation { rank: r });
            }
            rank[v] = r;
        }
        Self::from_ranks(rank, source)
    }

    /// Source first, then every other vertex by ascending index.
    pub fn source_first(n: usize, source: Vertex) -> Result<Self, GraphError> {
        if source >= n {
            return Err(GraphError::SourceOutOfRange { vertex: source, n });
        }
        let order = std::iter::once(source)
            .chain((0..n).filter(|&v| v != source))
            .collect();
        Self::from_order(order, source)
    }

    /// Checks that this ordering fits `g`.
    pub fn validate_for(&self, g: &Graph) -> Result<(), GraphError> {
        if self.rank.len() != g.vertex_count() {
            return Err(GraphError::OrderingLength {
                len: self.rank.len(),
                n: g.vertex_count(),
            });
        }
        if self.rank[g.source()] != 0 {
            return Err(GraphError::SourceNotFirst {
                vertex: g.source(),
                rank: self.rank[g.source()],
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Vertices in ascending rank.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }
}

/// Uniformly random ordering with the source fixed at rank 0.
///
/// Deterministic in `(n, source, seed)`: a Fisher-Yates shuffle of the
/// non-source vertices (in ascending index order) driven by ChaCha8 seeded
/// with `seed`. See [`crate::rng`] for the exact draw procedure.
pub fn random_ordering(g: &Graph, seed: u64) -> Ordering {
    let source = g.source();
    let mut rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| v != source).collect();
    let mut rng = SeededRng::new(seed);
    shuffle(&mut rng, &mut rest);
    let mut order = Vec::with_capacity(g.vertex_count());
    order.push(source);
    order.extend(rest);
    Ordering::from_order(order, source).expect("shuffle of non-source vertices is a permutation")
}

/// The G+ / G- split of a graph's edges under an ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePartition {
    /// Edges rising in rank, grouped by ascending tail rank.
    pub plus: Vec<Edge>,
    /// Edges falling in rank, grouped by descending tail rank.
    pub minus: Vec<Edge>,
    /// Self-loops; neither rising nor falling.
    pub loops: Vec<Edge>,
    plus_start: Vec<usize>,
    minus_start: Vec<usize>,
    loop_start: Vec<usize>,
}

impl EdgePartition {
    /// Rising out-edges of the vertex at rank `r`.
    pub fn plus_at_rank(&self, r: usize) -> &[Edge] {
        &self.plus[self.plus_start[r]..self.plus_start[r + 1]]
    }

    /// Falling out-edges of the vertex at rank `r`.
    pub fn minus_at_rank(&self, r: usize) -> &[Edge] {
        // minus is stored by descending tail rank
        let n = self.minus_start.len() - 1;
        let slot = n - 1 - r;
        &self.minus[self.minus_start[slot]..self.minus_start[slot + 1]]
    }

    /// Self-loops at the vertex of rank `r`.
    pub fn loops_at_rank(&self, r: usize) -> &[Edge] {
        &self.loops[self.loop_start[r]..self.loop_start[r + 1]]
    }
}

/// Splits the edges of `g` into rising, falling and self-loop buckets.
///
/// Within `plus`, edges are sorted by tail rank and then input order;
/// within `minus`, by descending tail rank and then input order. Callers
/// must pass an ordering already checked with [`Ordering::validate_for`].
pub fn partition_edges(g: &Graph, ord: &Ordering) -> EdgePartition {
    let n = g.vertex_count();
    debug_assert_eq!(ord.len(), n);

    let mut plus_buckets: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut minus_buckets: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut loop_buckets: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for e in g.edges() {
        let (ru, rv) = (ord.rank(e.tail), ord.rank(e.head));
        match ru.cmp(&rv) {
            std::cmp::Ordering::Less => plus_buckets[ru].push(*e),
            std::cmp::Ordering::Greater => minus_buckets[n - 1 - ru].push(*e),
            std::cmp::Ordering::Equal => loop_buckets[ru].push(*e),
        }
    }

    fn flatten(buckets: Vec<Vec<Edge>>) -> (Vec<Edge>, Vec<usize>) {
        let mut start = Vec::with_capacity(buckets.len() + 1);
        let mut flat = Vec::new();
        start.push(0);
        for b in buckets {
            flat.extend(b);
            start.push(flat.len());
        }
        (flat, start)
    }

    let (plus, plus_start) = flatten(plus_buckets);
    let (minus, minus_start) = flatten(minus_buckets);
    let (loops, loop_start) = flatten(loop_buckets);
    EdgePartition {
        plus,
        minus,
        loops,
        plus_start,
        minus_start,
        loop_start,
    }
}

/// Kahn's algorithm on an edge list; true if the edges form a DAG.
pub fn is_acyclic(n: usize, edges: &[Edge]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for e in edges {
        indeg[e.head] += 1;
        adj[e.tail].push(e.head);
    }
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &v in &adj[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    seen == n
}
