//! DIMACS shortest-path (`.gr`) reader and writer.
//!
//! ```text
//! c comment
//! p sp <n> <m>
//! a <u> <v> <w>
//! ```
//!
//! Vertex ids are 1-based on disk and 0-based in memory. Weights must be
//! integers (negative allowed). The source is not read from the file; the
//! caller names it.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("missing problem line `p sp <n> <m>`")]
    MissingProblemLine,
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: malformed: `{text}`")]
    Malformed { line: usize, text: String },
    #[error("problem line declares {declared} arcs, file has {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("line {line}: vertex id {id} outside 1..={n}")]
    IdOutOfRange { line: usize, id: i64, n: usize },
    #[error("line {line}: weight `{token}` is not an integer")]
    NonIntegerWeight { line: usize, token: String },
    #[error("edge {tail} -> {head} has non-integer weight {weight}")]
    UnwritableWeight { tail: usize, head: usize, weight: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Reads a `.gr` file; `source` is the 1-based id of the source vertex.
pub fn load_dimacs(path: impl AsRef<Path>, source: usize) -> Result<Graph, DimacsError> {
    let file = File::open(path)?;
    parse_dimacs(BufReader::new(file), source)
}

pub fn parse_dimacs(reader: impl BufRead, source: usize) -> Result<Graph, DimacsError> {
    let mut problem: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('c') {
            continue;
        }
        let malformed = || DimacsError::Malformed {
            line: line_no,
            text: text.to_string(),
        };
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts[0] {
            "p" => {
                if problem.is_some() {
                    return Err(DimacsError::DuplicateProblemLine { line: line_no });
                }
                if parts.len() != 4 || parts[1] != "sp" {
                    return Err(malformed());
                }
                let n: usize = parts[2].parse().map_err(|_| malformed())?;
                let m: usize = parts[3].parse().map_err(|_| malformed())?;
                problem = Some((n, m));
                edges.reserve(m);
            }
            "a" => {
                let (n, _) = problem.ok_or(DimacsError::MissingProblemLine)?;
                if parts.len() != 4 {
                    return Err(malformed());
                }
                let id = |tok: &str| -> Result<usize, DimacsError> {
                    let id: i64 = tok.parse().map_err(|_| malformed())?;
                    if id < 1 || id as u64 > n as u64 {
                        return Err(DimacsError::IdOutOfRange { line: line_no, id, n });
                    }
                    Ok(id as usize - 1)
                };
                let (u, v) = (id(parts[1])?, id(parts[2])?);
                let w: i64 = parts[3].parse().map_err(|_| DimacsError::NonIntegerWeight {
                    line: line_no,
                    token: parts[3].to_string(),
                })?;
                edges.push(Edge::new(u, v, w as f64));
            }
            // node descriptor lines carry nothing we need
            "n" => {}
            _ => return Err(malformed()),
        }
    }

    let (n, m) = problem.ok_or(DimacsError::MissingProblemLine)?;
    if edges.len() != m {
        return Err(DimacsError::ArcCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    if source < 1 || source > n {
        return Err(DimacsError::IdOutOfRange {
            line: 0,
            id: source as i64,
            n,
        });
    }
    Ok(Graph::new(n, edges, source - 1)?)
}

/// Writes `g` in `.gr` format with 1-based ids.
pub fn write_dimacs(g: &Graph, mut out: impl Write) -> Result<(), DimacsError> {
    writeln!(out, "c source vertex {}", g.source() + 1)?;
    writeln!(out, "p sp {} {}", g.vertex_count(), g.edge_count())?;
    for e in g.edges() {
        if e.weight.fract() != 0.0 || e.weight.abs() > i64::MAX as f64 {
            return Err(DimacsError::UnwritableWeight {
                tail: e.tail,
                head: e.head,
                weight: e.weight,
            });
        }
        writeln!(out, "a {} {} {}", e.tail + 1, e.head + 1, e.weight as i64)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph, DimacsError> {
        parse_dimacs(text.as_bytes(), 1)
    }

    #[test]
    fn single_arc() {
        let g = parse("c tiny\np sp 2 1\na 1 2 5\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[Edge::new(0, 1, 5.0)]);
        assert_eq!(g.source(), 0);
    }

    #[test]
    fn negative_weight() {
        let g = parse("p sp 2 1\na 1 2 -7\n").unwrap();
        assert_eq!(g.edges()[0].weight, -7.0);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse("c nothing\n"), Err(DimacsError::MissingProblemLine)));
        assert!(matches!(parse("a 1 2 3\n"), Err(DimacsError::MissingProblemLine)));
        assert!(matches!(
            parse("p sp 2 2\na 1 2 5\n"),
            Err(DimacsError::ArcCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(
            parse("p sp 2 1\na 1 3 5\n"),
            Err(DimacsError::IdOutOfRange { line: 2, id: 3, .. })
        ));
        assert!(matches!(
            parse("p sp 2 1\na 0 1 5\n"),
            Err(DimacsError::IdOutOfRange { id: 0, .. })
        ));
        assert!(matches!(
            parse("p sp 2 1\na 1 2 2.5\n"),
            Err(DimacsError::NonIntegerWeight { line: 2, .. })
        ));
        assert!(matches!(
            parse("p sp 2 0\np sp 2 0\n"),
            Err(DimacsError::DuplicateProblemLine { line: 2 })
        ));
        assert!(matches!(parse("p max 2 0\n"), Err(DimacsError::Malformed { .. })));
        assert!(matches!(
            parse_dimacs("p sp 2 0\n".as_bytes(), 3),
            Err(DimacsError::IdOutOfRange { id: 3, .. })
        ));
    }

    #[test]
    fn write_then_read() {
        let g = Graph::from_triples(3, 1, [(0, 1, 2.0), (1, 2, -4.0), (2, 2, 0.0)]).unwrap();
        let mut buf = Vec::new();
        write_dimacs(&g, &mut buf).unwrap();
        let back = parse_dimacs(buf.as_slice(), 2).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn refuses_fractional_weights() {
        let g = Graph::from_triples(2, 0, [(0, 1, 0.5)]).unwrap();
        assert!(matches!(
            write_dimacs(&g, Vec::new()),
            Err(DimacsError::UnwritableWeight { .. })
        ));
    }
}
