//! `bfrand`: generate instances, run seeded engine batches, verify against
//! the oracle.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input or
//! arguments, 3 negative cycle found under `--fail-on-cycle`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use bfrand_core::dimacs::{parse_dimacs, write_dimacs, DimacsError};
use bfrand_core::generators::{generate, GeneratorKind, GeneratorSpec};
use bfrand_core::negcycle::DetectionError;
use bfrand_core::oracle::{floyd_warshall_capped, DEFAULT_ORACLE_CAP};
use bfrand_core::trials::{emit_stats, run_trials, Instance, OrderingKind, StatsFormat, TrialConfig, TrialError};
use bfrand_core::Algorithm;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CYCLE: u8 = 3;

#[derive(Parser)]
#[command(name = "bfrand", version, about = "Randomized Bellman-Ford experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one engine over a seed range and emit per-trial statistics.
    Run(RunArgs),
    /// Write a generated instance as DIMACS.
    Generate(GenerateArgs),
    /// Check every engine against the oracle on an instance.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// DIMACS `.gr` file.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Generator kind (see `generate --help`).
    #[arg(long)]
    generator: Option<GeneratorKind>,
}

#[derive(Args)]
struct GenFlags {
    /// Vertex count.
    #[arg(long, short = 'n', default_value_t = 10)]
    n: usize,
    /// Edge count (random-sparse, optional for planted-cycle).
    #[arg(long, short = 'm')]
    m: Option<usize>,
    #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
    weight_min: i64,
    #[arg(long, default_value_t = 7, allow_negative_numbers = true)]
    weight_max: i64,
    /// Seed for the instance itself (trial seeds are separate).
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Add a zero-weight spanning arborescence from the source.
    #[arg(long)]
    reachable: bool,
    /// Resample until no negative cycle is reachable.
    #[arg(long)]
    cycle_free: bool,
    #[arg(long, default_value_t = 3)]
    cycle_len: usize,
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    cycle_weight: i64,
}

impl GenFlags {
    fn spec(&self, kind: GeneratorKind) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            n: self.n,
            m: self.m,
            weight_min: self.weight_min,
            weight_max: self.weight_max,
            seed: self.gen_seed,
            ensure_reachable: self.reachable,
            cycle_free: self.cycle_free,
            cycle_len: self.cycle_len,
            cycle_weight: self.cycle_weight,
        }
    }
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    gen: GenFlags,
    /// Source vertex, 1-based.
    #[arg(long = "source", default_value_t = 1)]
    source_vertex: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, short, default_value = "randomized")]
    algorithm: Algorithm,
    /// Seed range `a..b` (half-open), `a..=b`, or a single seed.
    #[arg(long, alias = "seed", default_value = "0..1", value_parser = parse_seeds)]
    seeds: Range<u64>,
    /// Tail-bound constant for the detection threshold.
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long)]
    check_oracle: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    detect_cycles: bool,
    /// Count every edge in every pass (basic engine).
    #[arg(long)]
    strict_count: bool,
    /// Vertex ordering for the yen engine.
    #[arg(long, default_value = "identity")]
    ordering: OrderingKind,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: StatsFormat,
    /// Exit 3 if any trial reports a negative cycle.
    #[arg(long, requires = "detect_cycles")]
    fail_on_cycle: bool,
    /// Write statistics here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, short)]
    generator: GeneratorKind,
    #[command(flatten)]
    gen: GenFlags,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, alias = "seed", default_value = "0..20", value_parser = parse_seeds)]
    seeds: Range<u64>,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    fail_on_cycle: bool,
}

fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
    let range = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..num(b)?.checked_add(1).ok_or("seed range overflows")?
    } else if let Some((a, b)) = s.split_once("..") {
        num(a)?..num(b)?
    } else {
        let a = num(s)?;
        a..a.checked_add(1).ok_or("seed overflows")?
    };
    if range.is_empty() {
        return Err(format!("empty seed range `{s}`"));
    }
    Ok(range)
}

fn parse_format(s: &str) -> Result<StatsFormat, String> {
    s.parse()
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<TrialError> for Failure {
    fn from(e: TrialError) -> Self {
        let code = match &e {
            TrialError::OracleMismatch { .. }
            | TrialError::CycleVerdictMismatch { .. }
            | TrialError::IterationCap { .. } => EXIT_VERIFY,
            TrialError::Detection(
                DetectionError::MissingEdge { .. }
                | DetectionError::NonNegativeCertificate { .. }
                | DetectionError::CapWithoutCycle { .. },
            ) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e)
    }
}

fn load_instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    if args.source_vertex == 0 {
        return Err(Failure::input("--source is 1-based"));
    }
    if let Some(path) = &args.source.input {
        let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let graph = parse_dimacs(bytes.as_slice(), args.source_vertex)
            .map_err(|e: DimacsError| Failure::input(format!("{}: {e}", path.display())))?;
        let label = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
        return Ok(Instance { graph, label });
    }
    let kind = args.source.generator.expect("clap enforces one instance source");
    let spec = args.gen.spec(kind);
    let mut graph = generate(&spec).map_err(Failure::input)?;
    if args.source_vertex != 1 {
        graph = graph.with_source(args.source_vertex - 1).map_err(Failure::input)?;
    }
    let label = if args.source_vertex == 1 {
        spec.to_string()
    } else {
        format!("{spec};source={}", args.source_vertex)
    };
    Ok(Instance { graph, label })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance)?;
    let config = TrialConfig {
        algorithm: args.algorithm,
        seeds: args.seeds,
        check_oracle: args.check_oracle,
        oracle_cap: args.oracle_cap,
        detect_cycles: args.detect_cycles,
        strict_count: args.strict_count,
        ordering: args.ordering,
        c: args.c,
    };
    let records = run_trials(&instance, &config)?;
    let mut out = output(&args.output)?;
    emit_stats(&records, args.format, &mut out).map_err(Failure::input)?;
    out.flush()?;
    if args.fail_on_cycle && records.iter().any(|r| r.negative_cycle_found) {
        return Err(Failure { code: EXIT_CYCLE, message: "negative cycle detected".into() });
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let spec = args.gen.spec(args.generator);
    let graph = generate(&spec).map_err(Failure::input)?;
    let mut out = output(&args.output)?;
    writeln!(out, "c {spec}")?;
    write_dimacs(&graph, &mut out).map_err(Failure::input)?;
    out.flush()?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance)?;
    let g = &instance.graph;
    let oracle = floyd_warshall_capped(g, args.oracle_cap).map_err(Failure::input)?;
    let has_cycle = oracle.has_reachable_negative_cycle;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "instance {} (n={}, m={}): negative cycle {}",
        instance.label,
        g.vertex_count(),
        g.edge_count(),
        if has_cycle { "reachable" } else { "absent" }
    )?;
    let mut failures = 0;
    for algorithm in Algorithm::ALL {
        if algorithm == Algorithm::Basic && has_cycle {
            writeln!(out, "{algorithm:<10} skipped: no cycle detector for the basic engine")?;
            continue;
        }
        let mut config = TrialConfig::new(algorithm, args.seeds.clone());
        config.check_oracle = true;
        config.oracle_cap = args.oracle_cap;
        config.detect_cycles = algorithm != Algorithm::Basic;
        config.ordering = OrderingKind::Random;
        config.c = args.c;
        match run_trials(&instance, &config) {
            Ok(records) => writeln!(out, "{algorithm:<10} ok ({} seeds)", records.len())?,
            Err(e) => {
                let f = Failure::from(e);
                if f.code != EXIT_VERIFY {
                    return Err(f);
                }
                failures += 1;
                writeln!(out, "{algorithm:<10} FAILED: {}", f.message)?;
            }
        }
    }
    if failures > 0 {
        return Err(Failure { code: EXIT_VERIFY, message: format!("{failures} engine(s) disagree with the oracle") });
    }
    if args.fail_on_cycle && has_cycle {
        return Err(Failure { code: EXIT_CYCLE, message: "negative cycle detected".into() });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bfrand: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
