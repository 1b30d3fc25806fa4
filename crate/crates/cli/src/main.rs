mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{ConfigError, ExperimentConfig};
use output::{sha256_hex, unix_now, write_run_record, RunRecord};

#[derive(Parser, Debug)]
#[command(
    name = "gapshift",
    version,
    about = "Gapped subshifts: gluing, counting and desk-scale certificates"
)]
struct Cli {
    /// Experiment configuration (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = gapshift::suite::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for sharded enumerations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Language counts and entropy profile.
    Entropy,
    /// Periodic-point census and growth profile.
    Periodic,
    /// Glue orbit segments from a request file.
    Glue {
        #[arg(long)]
        request: PathBuf,
        /// Search for witnesses at every gap up to `--max-gap` instead of gluing.
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        max_gap: Option<usize>,
    },
    /// Ergodic optimization over periodic orbits.
    Optimize,
    /// Oscillating point from the block scheduler.
    Irregular,
    /// Run every acceptance check.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Periodic => "periodic",
            Command::Glue { sweep: true, .. } => "glue-sweep",
            Command::Glue { .. } => "glue",
            Command::Optimize => "optimize",
            Command::Irregular => "irregular",
            Command::Verify => "verify",
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<gapshift::Error>() {
        Some(e) if e.is_resource_limit() => 3,
        Some(gapshift::Error::InvalidSpec(_) | gapshift::Error::Parse(_)) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let started = unix_now();
    let (cfg, bytes) = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => (ExperimentConfig::default(), Vec::new()),
    };
    cfg.build_spec()?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError(format!("threads: {e}")))?;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    commands::ensure_dir(&out)?;
    let outcome = match &cli.command {
        Command::Entropy => commands::entropy(&cfg, &out)?,
        Command::Periodic => commands::periodic(&cfg, &out)?,
        Command::Glue {
            request,
            sweep: false,
            ..
        } => commands::glue_cmd(&cfg, &out, request)?,
        Command::Glue {
            request,
            sweep: true,
            max_gap,
        } => commands::sweep(&cfg, &out, request, *max_gap)?,
        Command::Optimize => commands::optimize(&cfg, &out)?,
        Command::Irregular => commands::irregular(&cfg, &out)?,
        Command::Verify => commands::verify(&cfg, &out, cli.seed)?,
    };
    write_run_record(
        &out,
        &RunRecord {
            command: cli.command.name().into(),
            config_sha256: sha256_hex(&bytes),
            seed: cli.seed,
            started_unix: started,
            finished_unix: unix_now(),
            result_files: outcome.files.clone(),
            suite: outcome.suite.clone(),
        },
    )?;
    if let Some(msg) = &outcome.property_failure {
        eprintln!("{}", json!({"error": "property", "message": msg}));
        return Ok(1);
    }
    if let Some(msg) = &outcome.cap_failure {
        eprintln!("{}", json!({"error": "resource_limit", "message": msg}));
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let code = exit_code(&err);
            let kind = match code {
                2 => "config",
                3 => "resource_limit",
                _ => "failure",
            };
            eprintln!("{}", json!({"error": kind, "message": format!("{err:#}")}));
            ExitCode::from(code)
        }
    }
}
