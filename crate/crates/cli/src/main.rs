use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use mfbv::lab::{self, Artifact, ExperimentConfig, Subcommand};
use mfbv::{par, Error};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Numerical experiments on multiplicative functions in arithmetic progressions.
#[derive(Debug, Parser)]
#[command(name = "mfbv", version)]
struct Cli {
    /// bv-scan, xi-find, smooth-psi, rho, alpha, ramare, barrier, construct or uk
    subcommand: String,
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; overrides the config's `output`, default stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Also write the table as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => EXIT_CONFIG,
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_RUNTIME,
    }
}

fn describe(e: &Error, path: &Path) -> String {
    match e {
        Error::Config { line: Some(l), msg } => format!("{}:{l}: {msg}", path.display()),
        Error::Config { line: None, msg } => format!("{}: {msg}", path.display()),
        other => other.to_string(),
    }
}

fn json(artifact: &Artifact) -> String {
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = artifact
        .table
        .rows
        .iter()
        .map(|r| {
            artifact
                .table
                .header
                .iter()
                .zip(r)
                .map(|(h, v)| (h.clone(), serde_json::Value::String(v.clone())))
                .collect()
        })
        .collect();
    let doc = serde_json::json!({ "meta": artifact.meta, "columns": artifact.table.header, "rows": rows });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn run(cli: &Cli) -> Result<(), Error> {
    let sub: Subcommand = cli.subcommand.parse()?;
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| Error::Config { line: None, msg: format!("cannot read config: {e}") })?;
    let cfg = ExperimentConfig::parse(sub, &text)?;
    let artifact = par::with_threads(cli.threads, || lab::run_experiment(&cfg, cli.seed))?;
    let csv = artifact.csv();
    match cli.out.clone().or_else(|| cfg.str("output").map(PathBuf::from)) {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &cli.json {
        fs::write(path, json(&artifact))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mfbv: {}", describe(&e, &cli.config));
            ExitCode::from(exit_code(&e))
        }
    }
}
