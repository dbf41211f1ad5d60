use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pointcover::bench::{bench, Suite};
use pointcover::generate::{generate, GenParams, Model};
use pointcover::instance::{Duplicates, Instance};
use pointcover::solve::{kernelize_instance, parse_factor, solve, Algorithm, SolveOptions};
use pointcover::CliError;

#[derive(Parser)]
#[command(name = "pointcover", version, about = "Exact point cover by curves and planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a cover instance and print a JSON result record.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
        /// Budget; defaults to the instance's.
        #[arg(long)]
        k: Option<usize>,
        /// Also compute the minimum cover size.
        #[arg(long)]
        min: bool,
        #[arg(long)]
        witness: bool,
        /// Cross-check against the brute-force oracle when small enough.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Base-case multiplier `p/q` for the branching solvers.
        #[arg(long)]
        base_case_factor: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leave wall time out of the record.
        #[arg(long)]
        no_timing: bool,
        /// Drop repeated points (with a warning) instead of failing.
        #[arg(long)]
        dedup: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Remember failed plane-search nodes.
        #[arg(long)]
        memo: bool,
        /// Re-check search invariants at every node.
        #[arg(long)]
        debug_checks: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value = "line2")]
        family: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 1)]
        off: usize,
        #[arg(long, default_value_t = 3)]
        rest: usize,
        #[arg(long, default_value_t = 10)]
        range: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Kernelize an instance and write the reduced one.
    Kernelize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dedup: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark suite and print CSV.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf, dedup: bool) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)?;
    let mode = if dedup { Duplicates::Dedup } else { Duplicates::Reject };
    let (inst, dropped) = Instance::from_json(&text, mode)?;
    if dropped > 0 {
        eprintln!("warning: dropped {dropped} duplicate point(s)");
    }
    Ok(inst)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            input,
            algorithm,
            k,
            min,
            witness,
            verify,
            threads,
            base_case_factor,
            seed,
            no_timing,
            dedup,
            node_limit,
            memo,
            debug_checks,
            out,
        } => {
            let inst = load(&input, dedup)?;
            let opts = SolveOptions {
                algorithm,
                k,
                min,
                witness,
                verify,
                threads: threads.max(1),
                base_case_factor: base_case_factor.as_deref().map(parse_factor).transpose()?,
                seed,
                timing: !no_timing,
                node_limit,
                memo,
                debug_checks,
                ..Default::default()
            };
            let rec = solve(&inst, &opts)?;
            emit(&rec.to_json(), out.as_ref())
        }
        Command::Gen { model, family, n, k, m, noise, off, rest, range, seed, out } => {
            let params = GenParams { model, family, n, k, m, noise, off, rest, range };
            fs::write(out, generate(&params, seed)?.to_json())?;
            Ok(())
        }
        Command::Kernelize { input, k, seed, dedup, out } => {
            let inst = load(&input, dedup)?;
            let kern = kernelize_instance(&inst, k.unwrap_or(inst.k), seed)?;
            eprintln!(
                "{}: {} -> {} points, k {} -> {}",
                kern.metadata["verdict"].as_str().unwrap_or("?"),
                inst.points.len(),
                kern.points.len(),
                k.unwrap_or(inst.k),
                kern.k
            );
            fs::write(out, kern.to_json())?;
            Ok(())
        }
        Command::Bench { suite, threads, no_timing, out } => {
            let text = fs::read_to_string(suite)?;
            let suite: Suite = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("suite: {e}")))?;
            let base = SolveOptions { timing: !no_timing, ..Default::default() };
            emit(&bench(&suite, &base, threads.max(1))?, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
