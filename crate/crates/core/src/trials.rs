//! Batch runner: one engine over a seed range, optional oracle checks,
//! and CSV / JSON-lines output.

use std::fmt;
use std::io::Write;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    run_adaptive, run_basic, run_randomized, run_yen, Algorithm, CountMode, RunStats, SsspState,
};
use crate::generators::{adversarial_ordering, GeneratorError};
use crate::graph::{random_ordering, Graph, GraphError, Ordering, Vertex};
use crate::negcycle::{
    certify_cycle, detect_cycle_in_parent_graph, run_with_detection, DetectionError,
    DetectionOptions, ParentGraph,
};
use crate::oracle::{floyd_warshall_capped, OracleError, OracleResult, DEFAULT_ORACLE_CAP};

#[derive(Debug, Error)]
pub enum TrialError {
    #[error("invalid trial configuration: {0}")]
    Config(String),
    #[error("seed {seed}: {algorithm} gives D[{vertex}] = {got:?}, oracle says {expected:?}")]
    OracleMismatch {
        seed: u64,
        algorithm: Algorithm,
        vertex: Vertex,
        expected: Option<f64>,
        got: Option<f64>,
    },
    #[error("seed {seed}: negative cycle verdict {got}, oracle says {expected}")]
    CycleVerdictMismatch { seed: u64, expected: bool, got: bool },
    #[error("seed {seed}: {algorithm} hit its iteration cap after {iterations} iterations")]
    IterationCap {
        seed: u64,
        algorithm: Algorithm,
        iterations: u64,
    },
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingKind {
    /// Source first, then ascending vertex index.
    #[default]
    Identity,
    /// Seeded uniform ordering.
    Random,
    /// Alternating ranks for the worst-case path.
    Adversarial,
}

impl FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(Self::Identity),
            "random" => Ok(Self::Random),
            "adversarial" => Ok(Self::Adversarial),
            _ => Err(format!("unknown ordering `{s}`")),
        }
    }
}

impl OrderingKind {
    pub fn build(self, g: &Graph, seed: u64) -> Result<Ordering, TrialError> {
        match self {
            OrderingKind::Identity => Ok(Ordering::source_first(g.vertex_count(), g.source())?),
            OrderingKind::Random => Ok(random_ordering(g, seed)),
            OrderingKind::Adversarial => {
                if g.source() != 0 {
                    return Err(TrialError::Config(
                        "adversarial ordering assumes source vertex 0".into(),
                    ));
                }
                Ok(adversarial_ordering(g.vertex_count())?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub algorithm: Algorithm,
    pub seeds: Range<u64>,
    pub check_oracle: bool,
    pub oracle_cap: usize,
    pub detect_cycles: bool,
    pub strict_count: bool,
    pub ordering: OrderingKind,
    pub c: f64,
}

impl TrialConfig {
    pub fn new(algorithm: Algorithm, seeds: Range<u64>) -> Self {
        Self {
            algorithm,
            seeds,
            check_oracle: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
            detect_cycles: false,
            strict_count: false,
            ordering: OrderingKind::default(),
            c: 2.0,
        }
    }

    fn validate(&self) -> Result<(), TrialError> {
        if self.detect_cycles && self.algorithm == Algorithm::Basic {
            return Err(TrialError::Config(
                "cycle detection needs an adaptive engine (adaptive, yen or randomized)".into(),
            ));
        }
        if self.strict_count && self.algorithm != Algorithm::Basic {
            return Err(TrialError::Config("strict counting applies to the basic engine only".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(TrialError::Config(format!("c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// A graph plus a label saying where it came from (generator spec or
/// file digest).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub label: String,
}

/// One completed trial. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub iterations: u64,
    pub relax_calls: u64,
    pub improvements: u64,
    pub wall_time_ns: u64,
    pub negative_cycle_found: bool,
    pub c: f64,
    pub instance: String,
}

impl TrialRecord {
    pub const FIELDS: [&'static str; 11] = [
        "algorithm",
        "seed",
        "n",
        "m",
        "iterations",
        "relax_calls",
        "improvements",
        "wall_time_ns",
        "negative_cycle_found",
        "c",
        "instance",
    ];
}

struct Outcome {
    state: SsspState,
    stats: RunStats,
    cycle: Option<bool>,
}

fn run_one(g: &Graph, config: &TrialConfig, seed: u64) -> Result<Outcome, TrialError> {
    let algorithm = config.algorithm;
    let (state, stats) = match algorithm {
        Algorithm::Basic => {
            let mode = if config.strict_count {
                CountMode::Strict
            } else {
                CountMode::SkipUnreached
            };
            run_basic(g, mode)
        }
        Algorithm::Adaptive => run_adaptive(g),
        Algorithm::Yen => run_yen(g, &config.ordering.build(g, seed)?)?,
        Algorithm::Randomized if config.detect_cycles => {
            let opts = DetectionOptions {
                c: config.c,
                check_every_iteration: false,
            };
            let (state, stats, verdict) = run_with_detection(g, seed, opts)?;
            return Ok(Outcome {
                state,
                stats,
                cycle: Some(verdict.found),
            });
        }
        Algorithm::Randomized => {
            let (state, stats, _) = run_randomized(g, seed);
            (state, stats)
        }
    };

    if config.detect_cycles {
        let found = match detect_cycle_in_parent_graph(&ParentGraph::from_state(&state)) {
            Some(pc) => {
                certify_cycle(g, &pc)?;
                true
            }
            None if stats.cap_hit => {
                return Err(DetectionError::CapWithoutCycle {
                    cap: stats.iterations,
                }
                .into())
            }
            None => false,
        };
        return Ok(Outcome {
            state,
            stats,
            cycle: Some(found),
        });
    }
    if stats.cap_hit {
        return Err(TrialError::IterationCap {
            seed,
            algorithm,
            iterations: stats.iterations,
        });
    }
    Ok(Outcome {
        state,
        stats,
        cycle: None,
    })
}

fn verify(
    oracle: &OracleResult,
    config: &TrialConfig,
    seed: u64,
    outcome: &Outcome,
) -> Result<(), TrialError> {
    // a run without a detector cannot report the cycle the oracle sees
    let found = outcome.cycle.unwrap_or(false);
    if (outcome.cycle.is_some() || oracle.has_reachable_negative_cycle)
        && found != oracle.has_reachable_negative_cycle
    {
        return Err(TrialError::CycleVerdictMismatch {
            seed,
            expected: oracle.has_reachable_negative_cycle,
            got: found,
        });
    }
    if oracle.has_reachable_negative_cycle {
        return Ok(());
    }
    let got = outcome.state.distances();
    for (vertex, (&expected, &got)) in oracle.from_source().iter().zip(got).enumerate() {
        if expected != got {
            return Err(TrialError::OracleMismatch {
                seed,
                algorithm: config.algorithm,
                vertex,
                expected,
                got,
            });
        }
    }
    Ok(())
}

/// Runs every seed in `config.seeds` on `instance`.
///
/// Trials run in parallel; records come back in seed order. With
/// `check_oracle`, the oracle is skipped for graphs above `oracle_cap`.
pub fn run_trials(instance: &Instance, config: &TrialConfig) -> Result<Vec<TrialRecord>, TrialError> {
    config.validate()?;
    let g = &instance.graph;
    let oracle = if config.check_oracle && g.vertex_count() <= config.oracle_cap {
        Some(floyd_warshall_capped(g, config.oracle_cap)?)
    } else {
        None
    };

    config
        .seeds
        .clone()
        .into_par_iter()
        .map(|seed| {
            let start = Instant::now();
            let outcome = run_one(g, config, seed)?;
            let wall_time_ns = start.elapsed().as_nanos() as u64;
            if let Some(oracle) = &oracle {
                verify(oracle, config, seed, &outcome)?;
            }
            Ok(TrialRecord {
                algorithm: config.algorithm.to_string(),
                seed,
                n: g.vertex_count(),
                m: g.edge_count(),
                iterations: outcome.stats.iterations,
                relax_calls: outcome.stats.relax_calls,
                improvements: outcome.stats.improvements,
                wall_time_ns,
                negative_cycle_found: outcome.cycle.unwrap_or(false),
                c: config.c,
                instance: instance.label.clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatsFormat {
    #[default]
    Csv,
    JsonLines,
}

impl FromStr for StatsFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json-lines" => Ok(Self::JsonLines),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

impl fmt::Display for StatsFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StatsFormat::Csv => "csv",
            StatsFormat::JsonLines => "json-lines",
        })
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes records as CSV (header always present) or one JSON object per
/// line.
pub fn emit_stats(
    records: &[TrialRecord],
    format: StatsFormat,
    mut out: impl Write,
) -> Result<(), EmitError> {
    match format {
        StatsFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(TrialRecord::FIELDS)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        StatsFormat::JsonLines => {
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Mean and sample standard deviation.
pub fn mean_and_sd(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.into_iter().collect();
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
