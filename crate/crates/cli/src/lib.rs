//! Reproducible batch experiments on top of `ckl-core`.
//!
//! Each command reads a flat config, fans its rows out over a worker pool,
//! and collects them back in input order, so the CSV output depends only on
//! the config and the seed.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::PathBuf;

pub use config::Config;
pub use error::{CliError, Result};
pub use report::{Check, Meta, Outcome, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Kernel,
    Lebesgue,
    Growth,
    VerifyBounds,
    LowerBound,
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Kernel => "kernel",
            Self::Lebesgue => "lebesgue",
            Self::Growth => "growth",
            Self::VerifyBounds => "verify-bounds",
            Self::LowerBound => "lower-bound",
            Self::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker count; `None` uses every logical core.
    pub threads: Option<usize>,
    /// Overrides the config's `seed` key.
    pub seed: Option<u64>,
    pub allow_nonconverged: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            out: PathBuf::from("."),
            threads: None,
            seed: None,
            allow_nonconverged: false,
        }
    }
}

/// Seed in effect: the flag, else the config key, else zero.
pub fn effective_seed(cfg: &Config, opts: &RunOptions) -> Result<u64> {
    match opts.seed {
        Some(s) => Ok(s),
        None => Ok(cfg.usize("seed", Some(0))? as u64),
    }
}

/// Runs a command without touching the file system.
pub fn execute(cmd: Command, cfg: &Config, opts: &RunOptions) -> Result<Outcome> {
    let seed = effective_seed(cfg, opts)?;
    let pool = commands::Pool::new(opts.threads)?;
    match cmd {
        Command::Kernel => commands::kernel::run(cfg, seed, &pool),
        Command::Lebesgue => commands::lebesgue::run(cfg, seed, &pool),
        Command::Growth => commands::growth::run(cfg, &pool),
        Command::VerifyBounds => commands::bounds::run(cfg, seed, &pool),
        Command::LowerBound => commands::lower::run(cfg, &pool),
        Command::Selftest => commands::selftest::run(cfg, &pool),
    }
}

/// Runs a command and writes its files under `opts.out`. Non-converged
/// integrals are reported as an error after the files are written, unless
/// allowed.
pub fn run_and_write(cmd: Command, cfg: &Config, opts: &RunOptions) -> Result<(Outcome, Vec<PathBuf>)> {
    let outcome = execute(cmd, cfg, opts)?;
    let meta = Meta {
        command: cmd.name().to_string(),
        config_hash: cfg.hash(),
        seed: effective_seed(cfg, opts)?,
    };
    let paths = outcome.write(&opts.out, &meta)?;
    if outcome.nonconverged > 0 && !opts.allow_nonconverged {
        return Err(CliError::NonConverged(outcome.nonconverged));
    }
    Ok((outcome, paths))
}
