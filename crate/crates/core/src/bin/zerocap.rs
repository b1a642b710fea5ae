//! Command-line front end.
//!
//! Every verb reads JSON (or program text) and writes JSON, except
//! `simulate --csv`, which also writes a per-step trace. Exit codes: 0 on
//! success, 2 for unreadable or malformed input, 3 for domain errors, 4 when
//! a search or evaluation budget runs out.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use zerocap::bss::{evaluate, parse_program, EvalOutcome};
use zerocap::capacity::{capacity_bounds, CapacityOptions, Registry, DEFAULT_DEPTH};
use zerocap::channel::{zero_pattern, Channel, ChannelFile};
use zerocap::code::{code_to_file, rate_r0};
use zerocap::decide::{decide_solvability, indicator_s, indicator_u, instability_exponent, DecideOptions, Plant, Verdict};
use zerocap::graph::{confusability_graph, DEFAULT_VERTEX_LIMIT};
use zerocap::rational::{format_rational, parse_rational, Rational};
use zerocap::search::{construct_code_with_limit, search_minimal_gamma, verify_code, SearchError, SearchResult};
use zerocap::sim::{boundedness_report, run_one_trial, run_simulation, scalar_width_bound, write_trace_csv, SimConfig};

#[derive(Parser)]
#[command(name = "zerocap", version, about = "Zero-error capacity, solvability verdicts and estimation runs")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphFlags {
    /// Extra known-capacity records (JSON list).
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Largest graph the exact solvers accept.
    #[arg(long, default_value_t = DEFAULT_VERTEX_LIMIT)]
    vertex_limit: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Zero pattern and confusability graph of a channel.
    Classify {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Bounds on 2^C0 for a channel.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        /// Also write the confusability graph as DIMACS text.
        #[arg(long)]
        dimacs: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphFlags,
    },
    /// Compare a plant's instability exponent with a channel's capacity.
    Decide {
        #[arg(long, required_unless_present = "check")]
        plant: Option<PathBuf>,
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, env = "ZEROCAP_PRECISION", default_value_t = zerocap::decide::DEFAULT_PRECISION)]
        precision: u32,
        /// Re-check a verdict file instead of computing one.
        #[arg(long)]
        check: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphFlags,
    },
    /// Build a zero-error code beating the plant from independent sets.
    FindCode {
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_block: u32,
        #[arg(long, env = "ZEROCAP_PRECISION", default_value_t = zerocap::decide::DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = 4096)]
        vertex_limit: usize,
    },
    /// Scan code numbers from 0 for the least qualifying code.
    SearchGamma {
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, env = "ZEROCAP_PRECISION", default_value_t = zerocap::decide::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Run the closed estimation loop.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Bound on the sup error for the report (defaults to the scalar
        /// geometric bound when it applies).
        #[arg(long)]
        threshold: Option<String>,
        /// Per-step trace of trial 0.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a program on rational arguments.
    BssEval {
        #[arg(long)]
        program: PathBuf,
        /// Comma-separated rationals.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        args: String,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn report(&self) -> Value {
        let (kind, message) = match self {
            Failure::Parse(m) => ("parse", m),
            Failure::Domain(m) => ("domain", m),
            Failure::Budget(m) => ("budget", m),
        };
        json!({ "error": kind, "message": message })
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_channel(path: &Path) -> Result<Channel, Failure> {
    read_json::<ChannelFile>(path)?.into_channel().map_err(domain)
}

fn load_plant(path: &Path) -> Result<Plant, Failure> {
    let plant: Plant = read_json(path)?;
    plant.validate().map_err(domain)?;
    Ok(plant)
}

fn load_registry(flags: &GraphFlags) -> Result<Registry, Failure> {
    let mut registry = Registry::builtin();
    if let Some(path) = &flags.registry {
        registry.extend_from_json(&read(path)?).map_err(domain)?;
    }
    Ok(registry)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn classify(channel: &Channel) -> Value {
    let pattern = zero_pattern(channel);
    let graph = confusability_graph(&pattern, channel.alphabets());
    json!({
        "inputs": channel.alphabets().inputs().symbols(),
        "outputs": channel.alphabets().outputs().symbols(),
        "zero_pattern": pattern.bit_string(),
        "zero_pairs": pattern.symbol_pairs(channel.alphabets()),
        "confusability": graph.to_adjacency(),
        "edges": graph.edge_count(),
    })
}

fn search_output(result: &SearchResult, channel: &Channel, plant: &Plant, precision: u32) -> Result<Value, Failure> {
    let pattern = zero_pattern(channel);
    let exponent = instability_exponent(plant, precision).map_err(domain)?;
    let certificate = verify_code(&result.code, &pattern, &exponent).map_err(domain)?;
    Ok(json!({
        "mode": result.mode,
        "gamma": result.gamma,
        "n_examined": result.n_examined,
        "code": code_to_file(&result.code, channel.alphabets()),
        "rate": rate_r0(&result.code, &pattern),
        "certificate": certificate,
    }))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Classify { channel } => Ok(classify(&load_channel(&channel)?)),
        Command::Capacity { channel, depth, dimacs, graph } => {
            let channel = load_channel(&channel)?;
            let registry = load_registry(&graph)?;
            let pattern = zero_pattern(&channel);
            if let Some(path) = dimacs {
                let g = confusability_graph(&pattern, channel.alphabets());
                fs::write(&path, g.to_dimacs()).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            }
            let options = CapacityOptions { depth, vertex_limit: graph.vertex_limit };
            let bound = capacity_bounds(&pattern, channel.alphabets(), &registry, options).map_err(domain)?;
            Ok(to_value(&bound))
        }
        Command::Decide { plant, channel, depth, precision, check, graph } => {
            let channel = load_channel(&channel)?;
            if let Some(path) = check {
                let verdict: Verdict = read_json(&path)?;
                let valid = verdict.verify(&channel);
                if !valid {
                    return Err(Failure::Domain("the verdict's certificate does not re-verify".into()));
                }
                return Ok(json!({ "valid": valid, "outcome": verdict.outcome }));
            }
            let plant = load_plant(&plant.expect("clap requires --plant without --check"))?;
            let registry = load_registry(&graph)?;
            let options = DecideOptions { depth, precision, vertex_limit: graph.vertex_limit };
            let verdict = decide_solvability(&plant, &channel, &registry, options).map_err(domain)?;
            let mut value = to_value(&verdict);
            value["indicator_s"] = to_value(&indicator_s(&verdict));
            value["indicator_u"] = to_value(&indicator_u(&verdict));
            Ok(value)
        }
        Command::FindCode { plant, channel, max_block, precision, vertex_limit } => {
            let channel = load_channel(&channel)?;
            let plant = load_plant(&plant)?;
            let exponent = instability_exponent(&plant, precision).map_err(domain)?;
            let result = construct_code_with_limit(&zero_pattern(&channel), channel.alphabets(), &exponent, max_block, vertex_limit)
                .map_err(|e| match e {
                    SearchError::NotFound { .. } => Failure::Budget(e.to_string()),
                    other => domain(other),
                })?;
            search_output(&result, &channel, &plant, precision)
        }
        Command::SearchGamma { plant, channel, budget, precision } => {
            let channel = load_channel(&channel)?;
            let plant = load_plant(&plant)?;
            let exponent = instability_exponent(&plant, precision).map_err(domain)?;
            let result = search_minimal_gamma(&zero_pattern(&channel), channel.alphabets(), &exponent, budget)
                .map_err(|e| Failure::Budget(e.to_string()))?;
            search_output(&result, &channel, &plant, precision)
        }
        Command::Simulate { config, trials, seed, threshold, csv } => {
            let mut config: SimConfig = read_json(&config)?;
            config.trials = trials.unwrap_or(config.trials);
            config.seed = seed.unwrap_or(config.seed);
            config.record_steps = false;
            let threshold = match threshold {
                Some(text) => parse_rational(&text).map_err(|e| Failure::Parse(e.to_string()))?,
                None => default_threshold(&config)?,
            };
            let traces = run_simulation(&config).map_err(domain)?;
            if let Some(path) = csv {
                let mut recorded = config.clone();
                recorded.record_steps = true;
                let trace = run_one_trial(&recorded, 0).map_err(domain)?;
                let mut file = io::BufWriter::new(
                    fs::File::create(&path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
                );
                write_trace_csv(&trace, &mut file).map_err(|e| Failure::Parse(e.to_string()))?;
            }
            Ok(to_value(&boundedness_report(&traces, &threshold)))
        }
        Command::BssEval { program, args, budget } => {
            let program = parse_program(&read(&program)?).map_err(|e| Failure::Parse(e.to_string()))?;
            let args: Vec<Rational> = args
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(parse_rational)
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Parse(e.to_string()))?;
            match evaluate(&program, &args, budget).map_err(domain)? {
                EvalOutcome::Value(v) => Ok(json!({ "outcome": "value", "value": format_rational(&v) })),
                EvalOutcome::Diverged { steps } => Err(Failure::Budget(format!("no value within {steps} steps"))),
                EvalOutcome::DomainError(m) => Err(Failure::Domain(m)),
            }
        }
    }
}

/// The scalar geometric bound for one-step blocks, when it applies.
fn default_threshold(config: &SimConfig) -> Result<Rational, Failure> {
    let code = zerocap::code::code_from_file(&config.code, config.channel.alphabets()).map_err(domain)?;
    let [row] = config.plant.matrix.as_slice() else {
        return Err(Failure::Parse("pass --threshold for plants of dimension above 1".into()));
    };
    let initial = &config.initial_box[0];
    let half = (&initial.hi - &initial.lo) / Rational::from_integer(2.into());
    if code.block_length() != 1 {
        return Err(Failure::Parse("pass --threshold for codes longer than one symbol".into()));
    }
    scalar_width_bound(&row[0], code.message_count(), &config.noise_bound, &half)
        .ok_or_else(|| Failure::Parse("the plant outgrows the code; pass --threshold".into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("json values print");
            let written = match &output {
                Some(path) => fs::write(path, text + "\n"),
                None => writeln!(io::stdout(), "{text}"),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{}", Failure::Parse(e.to_string()).report());
                    ExitCode::from(2)
                }
            }
        }
        Err(failure) => {
            eprintln!("{}", failure.report());
            ExitCode::from(failure.code())
        }
    }
}
