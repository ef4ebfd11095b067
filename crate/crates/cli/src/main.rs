//! `nadev` — evaluate, sweep, validate, and compare deviation bounds for sums
//! of negatively associated random variables, driven by a TOML configuration.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 configuration error,
//! 3 domain or numerical error while evaluating.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nadev::config::{load_config, Config};
use nadev::report::{run_compare, run_eval, run_sweep, run_validate};
use nadev::{Error, Result};

#[derive(Parser)]
#[command(
    name = "nadev",
    version,
    about = "Deviation bounds for sums of negatively associated random variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configured bound at one threshold
    Eval {
        /// TOML run configuration
        #[arg(long)]
        config: PathBuf,
        /// Label of the bound to evaluate (its `id`, or the default
        /// family-based label)
        #[arg(long)]
        bound: String,
        /// Threshold x
        #[arg(long)]
        x: f64,
    },
    /// Evaluate every configured bound over the x grid, as CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Write the CSV here instead of stdout (overrides [run] out)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override [run] reps
        #[arg(long)]
        reps: Option<u64>,
        /// Override [run] master_seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override [run] threads
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the configured Monte Carlo checks against the bounds
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Rank the configured bounds at each grid threshold
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { config, bound, x } => {
            let config = load_config(&config)?;
            print!("{}", run_eval(&config, &bound, x)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            out,
            reps,
            seed,
            threads,
        } => {
            let mut config = load_config(&config)?;
            apply_overrides(&mut config, reps, seed, threads);
            build_thread_pool(config.run.threads)?;
            let csv = run_sweep(&config)?;
            emit(&csv, out.as_deref(), config.run.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            config,
            out,
            reps,
            seed,
            threads,
        } => {
            let mut config = load_config(&config)?;
            apply_overrides(&mut config, reps, seed, threads);
            build_thread_pool(config.run.threads)?;
            let (csv, any_failure) = run_validate(&config)?;
            emit(&csv, out.as_deref(), config.run.out.as_deref())?;
            Ok(if any_failure {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Compare { config } => {
            let config = load_config(&config)?;
            print!("{}", run_compare(&config)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn apply_overrides(
    config: &mut Config,
    reps: Option<u64>,
    seed: Option<u64>,
    threads: Option<usize>,
) {
    if let Some(reps) = reps {
        config.run.reps = reps;
    }
    if let Some(seed) = seed {
        config.run.master_seed = seed;
    }
    if let Some(threads) = threads {
        config.run.threads = Some(threads);
    }
}

fn build_thread_pool(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    }
    Ok(())
}

fn emit(content: &str, flag_out: Option<&Path>, config_out: Option<&str>) -> Result<()> {
    let target: Option<PathBuf> =
        flag_out.map(Path::to_path_buf).or_else(|| config_out.map(PathBuf::from));
    match target {
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
