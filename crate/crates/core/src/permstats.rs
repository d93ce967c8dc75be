//! Local minima and alternation counts of rank sequences.
//!
//! On a single-path shortest-path tree, each iteration of the randomized
//! engine advances accuracy up to the next interior local minimum of the
//! rank sequence along the path, so these counts predict iteration counts.

use thiserror::Error;

use crate::graph::{Ordering, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence is empty")]
    Empty,
    #[error("values at positions {first} and {second} are equal")]
    Duplicate { first: usize, second: usize },
    #[error("local-minima tail threshold needs n >= 3, got {0}")]
    TooShort(usize),
}

/// A non-empty sequence of pairwise distinct values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSequence<T> {
    values: Vec<T>,
}

impl<T: Ord> RankSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
        for w in idx.windows(2) {
            if values[w[0]] == values[w[1]] {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(SequenceError::Duplicate { first, second });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Interior positions smaller than both neighbours. Endpoints never
    /// count.
    pub fn local_minima(&self) -> usize {
        self.values
            .windows(3)
            .filter(|w| w[1] < w[0] && w[1] < w[2])
            .count()
    }
}

/// Counts interior local minima; rejects sequences with repeated values.
pub fn count_local_minima<T: Ord + Clone>(values: &[T]) -> Result<usize, SequenceError> {
    Ok(RankSequence::new(values.to_vec())?.local_minima())
}

/// `(n - 2)/3 + sqrt(2 c n ln n)`: a random permutation of length `n` has
/// more interior local minima than this with probability at most `1/n^c`.
pub fn local_minima_tail_threshold(n: usize, c: f64) -> Result<f64, SequenceError> {
    if n < 3 {
        return Err(SequenceError::TooShort(n));
    }
    let nf = n as f64;
    Ok((nf - 2.0) / 3.0 + (2.0 * c * nf * nf.ln()).sqrt())
}

/// Number of maximal monotone-rank runs along a path.
///
/// # Panics
///
/// If the path has fewer than two vertices or two consecutive vertices
/// share a rank.
pub fn alternation_count(path: &[Vertex], ord: &Ordering) -> usize {
    assert!(path.len() >= 2, "path needs at least one edge");
    let mut runs = 1;
    let mut prev_up = None;
    for pair in path.windows(2) {
        let (a, b) = (ord.rank(pair[0]), ord.rank(pair[1]));
        assert_ne!(a, b, "consecutive path vertices share rank {a}");
        let up = a < b;
        if let Some(p) = prev_up {
            if p != up {
                runs += 1;
            }
        }
        prev_up = Some(up);
    }
    runs
}

/// Ranks of `path`'s vertices in path order.
pub fn ranks_along(path: &[Vertex], ord: &Ordering) -> Vec<usize> {
    path.iter().map(|&v| ord.rank(v)).collect()
}
