//! The `cpnet` command line.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpnet_core::dominance::{DominanceEngine, DominanceError, LeafStrategy, Measures, PruningConfig};
use cpnet_core::model::{CpNet, ModelError, Outcome, OutcomeParseError, PreferenceMode};
use cpnet_core::oracle::{OracleError, PreferenceGraph};
use cpnet_core::ordering::{consistent_order, constrained_order, ConstraintSet, OrderingError};
use cpnet_core::rank::{Rank, Ranker};
use cpnet_core::DEFAULT_ENUMERATION_BUDGET;
use thiserror::Error;

use crate::format::{self, ParseError};
use crate::genbench::{self, ExperimentError, ExperimentSpec, GenSpec};

#[derive(Debug, Parser)]
#[command(name = "cpnet", version, about = "Exact ranks, orderings and dominance queries for acyclic CP-nets")]
pub struct Cli {
    /// Seed for generation and benchmarking.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of outcomes the oracle and full orderings may enumerate.
    #[arg(long, global = true, env = "CPNET_BUDGET", default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    pub budget: usize,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Lines)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Lines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Indifference,
}

impl From<ModeArg> for PreferenceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => PreferenceMode::Strict,
            ModeArg::Indifference => PreferenceMode::Indifference,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Fifo,
    RankPriority,
}

impl From<StrategyArg> for LeafStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Fifo => LeafStrategy::Fifo,
            StrategyArg::RankPriority => LeafStrategy::RankPriority,
        }
    }
}

#[derive(Debug, Args)]
pub struct NetArgs {
    /// CP-net file.
    #[arg(long)]
    pub net: PathBuf,
    /// Whether CPT rows may contain ties.
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a net file and summarise it.
    Validate(NetArgs),
    /// Print the exact rank of outcomes.
    Rank {
        #[command(flatten)]
        net: NetArgs,
        /// Outcome as comma-separated 1-based value indices; repeatable.
        #[arg(long, required = true)]
        outcome: Vec<String>,
        /// Also print a 6-place decimal approximation.
        #[arg(long)]
        decimal: bool,
    },
    /// Print a rank-induced consistent ordering.
    Order {
        #[command(flatten)]
        net: NetArgs,
        /// Order only these outcomes; repeatable. Default is every outcome.
        #[arg(long)]
        outcome: Vec<String>,
        /// File listing the permitted outcomes, one per line.
        #[arg(long, conflicts_with = "outcome")]
        permitted: Option<PathBuf>,
        /// Break rank ties lexicographically instead of printing tie groups.
        #[arg(long)]
        strict: bool,
    },
    /// Answer the dominance query `o ≻ o′`.
    Dominate {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        o: String,
        #[arg(long)]
        oprime: String,
        /// Pruning measures, e.g. `rank,penalty,suffix` or `none`.
        #[arg(long, default_value = "rank")]
        measures: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Fifo)]
        strategy: StrategyArg,
        /// Ask whether `o` and `o′` are joined by indifferent flips only.
        #[arg(long)]
        indifference_query: bool,
    },
    /// Classify a pair of outcomes with the full preference graph.
    Oracle {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        o: String,
        #[arg(long)]
        oprime: String,
    },
    /// Generate a random net.
    Generate {
        #[arg(long)]
        n: usize,
        /// Largest domain size.
        #[arg(long = "d-u", default_value_t = 2)]
        d_u: u16,
        #[arg(long)]
        edge_density: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        indifference_rate: f64,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pruning benchmark.
    Bench {
        /// Variable counts, e.g. `3-10` or `3,5,7`.
        #[arg(long, default_value = "3-10")]
        n: String,
        /// Largest domain sizes, e.g. `2` or `2,5`.
        #[arg(long = "d-u", default_value = "2")]
        d_u: String,
        #[arg(long, default_value_t = 100)]
        nets: usize,
        #[arg(long, default_value_t = 10)]
        queries: usize,
        /// Measure combinations to compare; default all seven.
        #[arg(long, num_args = 1..)]
        methods: Vec<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Fifo)]
        strategy: StrategyArg,
        #[arg(long)]
        edge_density: Option<f64>,
        /// Run on a single worker thread.
        #[arg(long)]
        single_thread: bool,
        /// Directory for the raw CSV, aggregate CSV and manifest.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "bench")]
        stem: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("io: {0}")]
    Output(#[from] std::io::Error),
    #[error("format: {0}")]
    Parse(#[from] ParseError),
    #[error("model: {0}")]
    Outcome(#[from] OutcomeParseError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Ordering(#[from] OrderingError),
    #[error("{0}")]
    Dominance(#[from] DominanceError),
    #[error("genbench: {0}")]
    Experiment(#[from] ExperimentError),
    #[error("{0}")]
    Argument(String),
}

impl CliError {
    /// Process exit status: 2 for bad arguments, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(_) => 2,
            _ => 1,
        }
    }
}

fn read_net(args: &NetArgs) -> Result<CpNet, CliError> {
    let text = std::fs::read_to_string(&args.net).map_err(|source| CliError::Io { path: args.net.clone(), source })?;
    Ok(format::parse(&text, args.mode.into())?)
}

fn read_outcome(net: &CpNet, text: &str) -> Result<Outcome, CliError> {
    let o: Outcome = text.parse()?;
    net.check_outcome(&o)?;
    Ok(o)
}

fn read_outcome_list(net: &CpNet, path: &Path) -> Result<Vec<Outcome>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| read_outcome(net, l))
        .collect()
}

fn approx(r: &Rank) -> String {
    format!("{:.6}", r.to_f64())
}

/// Parses `3-10`, `3,5,7` or a mix such as `3-5,8`.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>, CliError>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let bad = || CliError::Argument(format!("cannot read `{text}` as a list such as `3-10` or `3,5,7`"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once('-') {
            let a: T = a.trim().parse().map_err(|_| bad())?;
            let b: T = b.trim().parse().map_err(|_| bad())?;
            for v in a.into()..=b.into() {
                out.push(T::try_from(v).map_err(|_| bad())?);
            }
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn csv_line(fields: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

/// Executes a parsed command line, writing results to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let csv = cli.format == OutputFormat::Csv;
    let mut text = String::new();
    match &cli.command {
        Command::Validate(args) => {
            let net = read_net(args)?;
            if csv {
                text.push_str("variables,edges,outcomes,mode\n");
                let count = net.outcome_count().map_or("overflow".into(), |c| c.to_string());
                text.push_str(&csv_line(&[
                    &net.variable_count().to_string(),
                    &net.edge_count().to_string(),
                    &count,
                    &net.mode().to_string(),
                ]));
            } else {
                writeln!(text, "valid").unwrap();
                writeln!(text, "variables: {}", net.variable_count()).unwrap();
                writeln!(text, "edges: {}", net.edge_count()).unwrap();
                match net.outcome_count() {
                    Some(c) => writeln!(text, "outcomes: {c}").unwrap(),
                    None => writeln!(text, "outcomes: more than 2^128").unwrap(),
                }
                writeln!(text, "mode: {}", net.mode()).unwrap();
            }
        }
        Command::Rank { net: args, outcome, decimal } => {
            let net = read_net(args)?;
            let ranker = Ranker::new(&net);
            if csv {
                text.push_str(if *decimal { "outcome,rank,approx\n" } else { "outcome,rank\n" });
            }
            for o in outcome {
                let o = read_outcome(&net, o)?;
                let r = ranker.rank(&o);
                match (csv, decimal) {
                    (true, true) => text.push_str(&csv_line(&[&o.to_string(), &r.to_string(), &approx(&r)])),
                    (true, false) => text.push_str(&csv_line(&[&o.to_string(), &r.to_string()])),
                    (false, true) => writeln!(text, "{r} (approx. {})", approx(&r)).unwrap(),
                    (false, false) => writeln!(text, "{r}").unwrap(),
                }
            }
        }
        Command::Order { net: args, outcome, permitted, strict } => {
            let net = read_net(args)?;
            let ranker = Ranker::new(&net);
            let ordering = if let Some(path) = permitted {
                let list = read_outcome_list(&net, path)?;
                constrained_order(&ranker, &ConstraintSet::Explicit(list), *strict, cli.budget)?
            } else if outcome.is_empty() {
                consistent_order(&ranker, None, *strict, cli.budget)?
            } else {
                let list = outcome.iter().map(|o| read_outcome(&net, o)).collect::<Result<Vec<_>, _>>()?;
                consistent_order(&ranker, Some(&list), *strict, cli.budget)?
            };
            if csv {
                text.push_str("position,outcome,rank,group,tie_broken\n");
                let mut position = 0;
                for (g, group) in ordering.groups().iter().enumerate() {
                    for e in group.entries {
                        position += 1;
                        text.push_str(&csv_line(&[
                            &position.to_string(),
                            &e.outcome.to_string(),
                            &e.rank.to_string(),
                            &(g + 1).to_string(),
                            &e.tie_broken.to_string(),
                        ]));
                    }
                }
            } else if *strict {
                for e in ordering.entries() {
                    writeln!(text, "{} {}", e.outcome, e.rank).unwrap();
                }
            } else {
                for group in ordering.groups() {
                    let members: Vec<String> = group.entries.iter().map(|e| e.outcome.to_string()).collect();
                    if members.len() == 1 {
                        writeln!(text, "{} {}", members[0], group.rank).unwrap();
                    } else {
                        writeln!(text, "[{}] {}", members.join(" "), group.rank).unwrap();
                    }
                }
            }
        }
        Command::Dominate { net: args, o, oprime, measures, strategy, indifference_query } => {
            let net = read_net(args)?;
            let (o, o_prime) = (read_outcome(&net, o)?, read_outcome(&net, oprime)?);
            let engine = DominanceEngine::new(&net);
            if *indifference_query {
                let answer = engine.indifference_query(&o, &o_prime)?;
                if csv {
                    text.push_str("indifferent\n");
                }
                writeln!(text, "{answer}").unwrap();
            } else {
                let measures: Measures = measures.parse().map_err(|e| CliError::Argument(format!("{e}")))?;
                let config = PruningConfig::new(measures).with_strategy((*strategy).into()).with_mode(args.mode.into());
                let result = engine.dominates(&o, &o_prime, &config)?;
                let witness = result
                    .witness
                    .as_ref()
                    .map(|w| w.iter().map(Outcome::to_string).collect::<Vec<_>>().join(" -> "))
                    .unwrap_or_default();
                let reason = result.zero_traversal_reason.map(|r| r.to_string()).unwrap_or_default();
                if csv {
                    text.push_str("answer,outcomes_traversed,witness,zero_reason\n");
                    text.push_str(&csv_line(&[
                        &result.answer.to_string(),
                        &result.outcomes_traversed.to_string(),
                        &witness,
                        &reason,
                    ]));
                } else {
                    writeln!(text, "{}", result.answer).unwrap();
                    writeln!(text, "outcomes traversed: {}", result.outcomes_traversed).unwrap();
                    if result.witness.is_some() {
                        writeln!(text, "witness: {witness}").unwrap();
                    }
                    if !reason.is_empty() {
                        writeln!(text, "zero-traversal reason: {reason}").unwrap();
                    }
                }
            }
        }
        Command::Oracle { net: args, o, oprime } => {
            let net = read_net(args)?;
            let (o, o_prime) = (read_outcome(&net, o)?, read_outcome(&net, oprime)?);
            let graph = PreferenceGraph::build(&net, cli.budget)?;
            if csv {
                text.push_str("classification\n");
            }
            writeln!(text, "{}", graph.entails(&o, &o_prime)).unwrap();
        }
        Command::Generate { n, d_u, edge_density, indifference_rate, out: path } => {
            if *n == 0 || *d_u < 2 {
                return Err(CliError::Argument("need --n at least 1 and --d-u at least 2".into()));
            }
            if !(0.0..1.0).contains(indifference_rate) {
                return Err(CliError::Argument("--indifference-rate must lie in [0, 1)".into()));
            }
            let spec = GenSpec { edge_density: *edge_density, ..GenSpec::new(*n, *d_u, cli.seed) }
                .with_indifference(*indifference_rate);
            let net = genbench::generate_net(&spec);
            let body = format::serialize(&net);
            match path {
                Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io { path: p.clone(), source })?,
                None => text.push_str(&body),
            }
        }
        Command::Bench { n, d_u, nets, queries, methods, strategy, edge_density, single_thread, out_dir, stem } => {
            let ns: Vec<u64> = parse_list(n)?;
            let ds: Vec<u16> = parse_list(d_u)?;
            let methods = if methods.is_empty() {
                Measures::combinations().to_vec()
            } else {
                methods
                    .iter()
                    .map(|m| m.parse::<Measures>().map_err(|e| CliError::Argument(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let spec = ExperimentSpec {
                grid: ns.iter().flat_map(|&n| ds.iter().map(move |&d| (n as usize, d))).collect(),
                nets_per_cell: *nets,
                queries_per_net: *queries,
                methods,
                seed: cli.seed,
                leaf_strategy: (*strategy).into(),
                edge_density: *edge_density,
                single_thread: *single_thread,
            };
            let exp = genbench::run_experiment(&spec)?;
            match out_dir {
                Some(dir) => {
                    let manifest = genbench::write_outputs(dir, stem, &spec, &exp)?;
                    writeln!(text, "wrote {} records to {}", manifest.records, dir.join(&manifest.raw_csv).display()).unwrap();
                    writeln!(text, "aggregate: {}", dir.join(&manifest.aggregate_csv).display()).unwrap();
                }
                None => {
                    let mut buf = Vec::new();
                    genbench::write_aggregate_csv(&exp.stats, &mut buf)?;
                    text.push_str(&String::from_utf8(buf).expect("utf-8"));
                }
            }
        }
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}
