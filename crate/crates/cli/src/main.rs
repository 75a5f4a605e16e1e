use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ckl::{run_and_write, CliError, Command, Config, RunOptions};
use clap::Parser;

#[derive(Parser)]
#[command(version, about = "Cesàro kernel experiments with CSV reports")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` config file (optional for selftest)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: logical cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for sampled points; overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// Keep going when an integral misses its tolerance
    #[arg(long)]
    allow_nonconverged: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => Config::load(p),
        None if cli.command == Command::Selftest => Ok(Config::default()),
        None => Err(CliError::MissingKey("--config".into())),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        out: cli.out,
        threads: cli.threads,
        seed: cli.seed,
        allow_nonconverged: cli.allow_nonconverged,
    };
    let start = Instant::now();
    match run_and_write(cli.command, &cfg, &opts) {
        Ok((outcome, paths)) => {
            for c in &outcome.checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            for p in &paths {
                eprintln!("wrote {}", p.display());
            }
            if outcome.nonconverged > 0 {
                eprintln!("warning: {} integrals did not converge", outcome.nonconverged);
            }
            eprintln!("{} finished in {:.2?}", cli.command.name(), start.elapsed());
            if cli.command == Command::Selftest && !outcome.all_pass() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::NonConverged(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
