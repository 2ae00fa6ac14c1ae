use std::{
    fs,
    path::PathBuf,
    process::ExitCode,
    time::Duration,
};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use steiner_bench::{
    read_best_known, read_stp,
    record::{read_records, records_to_csv, write_results},
    report::{emit_plots, write_aggregate},
    runner::{run_suite, solve, SolveOutput, WallDeadline},
    Algo, AlgoSpec, BestKnownTable, Status, SuiteConfig,
};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Steiner tree solvers and SteinLib benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct AlgoArgs {
    /// Largest IR component; repeat for a k sweep.
    #[arg(long = "k", default_values_t = [3])]
    k: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multistart restarts.
    #[arg(long, default_value_t = steiner_core::multistart::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Generate IR components without the shared subset cache.
    #[arg(long)]
    ir_no_cache: bool,
    /// Rank Zelikovsky triples by the two largest pair saves.
    #[arg(long)]
    zel_two_largest: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run solvers over every .stp file of a directory.
    Run {
        #[arg(long, value_enum, required = true)]
        algo: Vec<Algo>,
        #[command(flatten)]
        params: AlgoArgs,
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        best_known: Option<PathBuf>,
        #[arg(long, default_value_t = 600)]
        timeout_sec: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Run every pair in a child process that is killed at the limit.
        #[arg(long)]
        isolate: bool,
    },
    /// Per-class tables from a records file.
    Aggregate {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Histogram and scatter data from a records file.
    Plots {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and print the tree as JSON.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[command(flatten)]
        params: AlgoArgs,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 600)]
        timeout_sec: u64,
    },
}

fn specs(algos: &[Algo], p: &AlgoArgs) -> Vec<AlgoSpec> {
    let mut out = Vec::new();
    for &algo in algos {
        let base = AlgoSpec {
            seed: p.seed,
            restarts: p.restarts,
            ir_cache: !p.ir_no_cache,
            zel_two_largest: p.zel_two_largest,
            ..AlgoSpec::new(algo)
        };
        if algo == Algo::Ir {
            out.extend(p.k.iter().map(|&k| AlgoSpec { k, ..base }));
        } else {
            out.push(base);
        }
    }
    out
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Run { algo, params, instances, best_known, timeout_sec, jobs, out, format, isolate } => {
            let table = match best_known {
                Some(p) => read_best_known(&p)?,
                None => BestKnownTable::default(),
            };
            let config = SuiteConfig {
                timeout: Duration::from_secs(timeout_sec),
                jobs,
                isolate: if isolate { Some(std::env::current_exe()?) } else { None },
            };
            let records = run_suite(&instances, &table, &specs(&algo, &params), &config)
                .with_context(|| format!("reading {}", instances.display()))?;
            fs::create_dir_all(&out)?;
            match format {
                Format::Csv => fs::write(out.join("records.csv"), records_to_csv(&records)?)?,
                Format::Json => fs::write(out.join("records.json"), serde_json::to_string_pretty(&records)?)?,
            }
            fs::write(out.join("results.csv"), write_results(&records))?;
            let errors = records.iter().filter(|r| r.status == Status::Error).count();
            if errors > 0 {
                log::error!("{errors} runs ended in error");
            }
            Ok(errors == 0)
        }
        Cmd::Aggregate { records, out } => {
            let records = read_records(&records).with_context(|| format!("reading {}", records.display()))?;
            write_aggregate(&records, &out)?;
            Ok(records.iter().all(|r| r.status != Status::Error))
        }
        Cmd::Plots { records, out } => {
            let records = read_records(&records).with_context(|| format!("reading {}", records.display()))?;
            emit_plots(&records, &out)?;
            Ok(records.iter().all(|r| r.status != Status::Error))
        }
        Cmd::Solve { algo, params, instance, timeout_sec } => {
            let inst = read_stp(&instance)?;
            let spec = specs(&[algo], &params)[0];
            let deadline = WallDeadline::new(Duration::from_secs(timeout_sec));
            let output = SolveOutput::from_result(solve(&inst, &spec, &deadline));
            println!("{}", serde_json::to_string(&output)?);
            Ok(output.status != Status::Error)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STEINER_LOG", "warn")).init();
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
