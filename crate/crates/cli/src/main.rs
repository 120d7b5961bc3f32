//! `spi`: key generation, encryption, decryption and both attacks, driven by
//! a JSON experiment config. Every command writes into `--out` atomically.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spi_crack::SpiError;

use crate::config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 1.
    Validation(String),
    /// Failure while running: exit code 2.
    Runtime(String),
}

impl From<SpiError> for CliError {
    fn from(e: SpiError) -> Self {
        match e {
            SpiError::Io { .. } => CliError::Runtime(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "spi", version, about = "Encrypted single-pixel imaging and attacks on it")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Experiment config (JSON); flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed, hexadecimal.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Worker threads for the attacks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Record wall-clock time in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a pattern key (and, for Type II, the secret order).
    Keygen,
    /// Encrypt the configured plaintext corpus.
    Encrypt(commands::EncryptArgs),
    /// Decrypt ciphertexts by TV-regularized reconstruction.
    Decrypt(commands::DecryptArgs),
    /// Known-plaintext attack.
    Kpa(commands::KpaArgs),
    /// Ciphertext-only attack on a Type II system.
    Coa(commands::CoaArgs),
    /// Score stored artifacts against the truth.
    Eval(commands::EvalArgs),
    /// Collect run reports into summary tables.
    Report(commands::ReportArgs),
}

fn resolve(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = &common.seed {
        cfg.seed = seed.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let cfg = resolve(&cli.common)?;
    let ctx = commands::Context { cfg, timing: cli.common.timing };
    match cli.command {
        Command::Keygen => commands::keygen(&ctx),
        Command::Encrypt(a) => commands::encrypt(&ctx, &a),
        Command::Decrypt(a) => commands::decrypt(&ctx, &a),
        Command::Kpa(a) => commands::kpa(&ctx, &a),
        Command::Coa(a) => commands::coa(&ctx, &a),
        Command::Eval(a) => commands::eval(&ctx, &a),
        Command::Report(a) => commands::report(&ctx, &a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
