use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use force_cli::sim::{lockserv_spec, lockserv_traces, parse_universe, random_traces};
use force_core::io::{
    export_clause_filter, parse_config, parse_formulas, parse_traces, print_formula,
    write_formulas, write_traces, ClauseFilter,
};
use force_core::logic::{Compiled, Structure};
use force_core::oracle::{brute_force_oracle, diff, entailment_family, OracleConfig};
use force_core::search::SearchSpec;
use force_core::synthesis::{force, minimize, PruningConfig, SynthesisConfig};
use log::warn;

#[derive(Parser)]
#[command(
    name = "force",
    version,
    about = "Enumerative synthesis of first-order invariants from sampled states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Filter,
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    Lockserv,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize every strongest formula of the search space that holds on the traces.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Let same-sort variables take equal values.
        #[arg(long)]
        no_distinct: bool,
        #[arg(long, env = "FORCE_THREADS")]
        threads: Option<usize>,
        /// Write per-slice statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Evaluate formulas on every sample; exits 1 if any formula fails.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        formulas: PathBuf,
    },
    /// Write a trace file sampled from a protocol or from random structures.
    GenTraces {
        #[arg(long, value_enum)]
        protocol: Protocol,
        /// Search-space config providing the signature (required for `random`).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Universe sizes such as `node=2,lock=1`; repeat for several.
        #[arg(long, required = true)]
        universe: Vec<String>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Samples per universe.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare synthesis against exhaustive enumeration; exits 1 on a mismatch.
    OracleDiff {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        traces: PathBuf,
        /// Entailment is checked on universes up to the variable count plus this bound.
        #[arg(long, default_value_t = 1)]
        universe_bound: u32,
        #[arg(long, hide = true)]
        no_dnf_modulo: bool,
        #[arg(long, hide = true)]
        no_blocking: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load(config: &Path, traces: &Path) -> Result<(SearchSpec, Vec<Structure>)> {
    let spec = parse_config(&read(config)?).with_context(|| format!("in {}", config.display()))?;
    let sigma = parse_traces(&read(traces)?, spec.signature())
        .with_context(|| format!("in {}", traces.display()))?;
    Ok((spec, sigma))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Synth {
            config,
            traces,
            out,
            format,
            no_distinct,
            threads,
            stats,
        } => {
            let (mut spec, sigma) = load(&config, &traces)?;
            if no_distinct {
                spec = spec.with_distinct(false);
            }
            let cfg = SynthesisConfig {
                pruning: PruningConfig::default(),
                threads,
            };
            let result = force(&spec, &sigma, &cfg)?;
            let text = match format {
                OutFormat::Text => write_formulas(&spec, &result.all()),
                OutFormat::Filter => {
                    let clauses = minimize(&result.satisfied_clauses);
                    export_clause_filter(&spec, &ClauseFilter::new(clauses))
                }
            };
            write(&out, &text)?;
            if let Some(path) = stats {
                let doc = serde_json::json!({
                    "samples": sigma.len(),
                    "clauses": result.clauses.len(),
                    "formulas": result.formulas.len(),
                    "generated": result.total_generated(),
                    "tested": result.total_tested(),
                    "times": result.times,
                    "slices": result.stats,
                });
                write(&path, &serde_json::to_string_pretty(&doc)?)?;
            }
            eprintln!(
                "{} clauses, {} other formulas",
                result.clauses.len(),
                result.formulas.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            config,
            traces,
            formulas,
        } => {
            let (spec, sigma) = load(&config, &traces)?;
            let fs = parse_formulas(&read(&formulas)?, &spec)
                .with_context(|| format!("in {}", formulas.display()))?;
            if fs.is_empty() {
                warn!("no formulas to check");
            }
            let mut all_ok = true;
            for f in &fs {
                let c = Compiled::new(f);
                match sigma.iter().position(|m| !c.eval(m)) {
                    None => println!("ok    {}", print_formula(&spec, f)),
                    Some(i) => {
                        all_ok = false;
                        println!("FAIL  {}  (sample {})", print_formula(&spec, f), i);
                    }
                }
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::GenTraces {
            protocol,
            config,
            universe,
            steps,
            samples,
            seed,
            density,
            out,
        } => {
            let spec = match (&config, protocol) {
                (Some(path), _) => {
                    parse_config(&read(path)?).with_context(|| format!("in {}", path.display()))?
                }
                (None, Protocol::Lockserv) => lockserv_spec(),
                (None, Protocol::Random) => bail!("--protocol random needs --config"),
            };
            let sig = spec.signature();
            let universes = universe
                .iter()
                .map(|u| parse_universe(sig, u))
                .collect::<Result<Vec<_>>>()?;
            let states = match protocol {
                Protocol::Lockserv => lockserv_traces(sig, &universes, steps, samples, seed)?,
                Protocol::Random => random_traces(sig, &universes, samples, density, seed)?,
            };
            write(&out, &write_traces(sig, &states))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleDiff {
            config,
            traces,
            universe_bound,
            no_dnf_modulo,
            no_blocking,
        } => {
            let (spec, sigma) = load(&config, &traces)?;
            let ocfg = OracleConfig {
                universe_extra: universe_bound,
                ..OracleConfig::default()
            };
            let oracle = brute_force_oracle(&spec, &sigma, &ocfg)?;
            let cfg = SynthesisConfig {
                pruning: PruningConfig {
                    blocking: !no_blocking,
                    dnf_modulo_clauses: !no_dnf_modulo,
                },
                threads: None,
            };
            let result = force(&spec, &sigma, &cfg)?;
            let family = entailment_family(&spec, &ocfg);
            let report = diff(&sigma, &result.all(), &oracle, &family);
            println!("raw candidates:      {}", oracle.raw_count);
            println!("canonical formulas:  {}", oracle.canonical_count);
            println!("satisfied formulas:  {}", oracle.satisfied.len());
            println!("oracle output:       {}", oracle.maximal.len());
            println!("synthesized output:  {}", result.all().len());
            println!("comparison structures: {}", family.len());
            for f in &report.uncovered {
                println!("not entailed by the output: {}", print_formula(&spec, f));
            }
            for f in &report.unsatisfied {
                println!("output formula fails a sample: {}", print_formula(&spec, f));
            }
            if let Some(i) = report.counterexample {
                println!("conjunctions differ on comparison structure {i}");
            }
            if report.equivalent() {
                println!("equivalent");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("NOT equivalent");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
