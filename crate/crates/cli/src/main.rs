mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{manifest_path, render, side_path, write_atomic, Format, Manifest};

#[derive(Parser)]
#[command(
    name = "polylim",
    version,
    about = "Exact series, limit laws and Monte Carlo for lattice polygon moments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Serialize)]
pub struct OutputArgs {
    /// Write to this file (plus `<out>.manifest.json`) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force enumeration of lattice objects and their moment parameters.
    Enumerate(commands::EnumerateArgs),
    /// Series solution of a functional equation, with residual checks and moments.
    Series(commands::SeriesArgs),
    /// Critical amplitudes, limit moments and their ratios.
    Limits(commands::LimitsArgs),
    /// Monte Carlo estimates of layer moments of self-avoiding polygons.
    Mc(commands::McArgs),
    /// Weighted least-squares extrapolation of Monte Carlo ratios in 1/(2 n0).
    Extrapolate(commands::ExtrapolateArgs),
    /// Runs series, limits, mc and extrapolate into one output directory.
    Repro(commands::ReproArgs),
}

/// Failure classes with dedicated exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("statistical validation failed: {0}")]
    Statistical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Statistical(_) => 4,
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("POLYLIM_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("POLYLIM_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Option<Failure>> {
    configure_threads()?;
    let start = Instant::now();
    let (name, out, report, params) = match cli.command {
        Command::Enumerate(a) => (
            "enumerate",
            a.output.clone(),
            commands::enumerate(&a)?,
            serde_json::to_value(&a)?,
        ),
        Command::Series(a) => (
            "series",
            a.output.clone(),
            commands::series(&a)?,
            serde_json::to_value(&a)?,
        ),
        Command::Limits(a) => (
            "limits",
            a.output.clone(),
            commands::limits(&a)?,
            serde_json::to_value(&a)?,
        ),
        Command::Mc(a) => (
            "mc",
            a.output.clone(),
            commands::mc(&a)?,
            serde_json::to_value(&a)?,
        ),
        Command::Extrapolate(a) => (
            "extrapolate",
            a.output.clone(),
            commands::extrapolate(&a)?,
            serde_json::to_value(&a)?,
        ),
        Command::Repro(a) => return commands::repro(&a, start),
    };
    let text = render(&report, out.format);
    match &out.out {
        None => print!("{text}"),
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            let mut files = vec![(path.clone(), text.into_bytes())];
            for (suffix, contents) in &report.extra {
                let p = side_path(path, suffix);
                write_atomic(&p, contents.as_bytes())?;
                files.push((p, contents.clone().into_bytes()));
            }
            let mut manifest = Manifest::new(name, params, report.seeds.clone(), start.elapsed());
            for (p, c) in &files {
                manifest.record(p, c);
            }
            manifest.write(&manifest_path(path))?;
        }
    }
    Ok(report.failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) => {
            eprintln!("polylim: {f}");
            ExitCode::from(f.code())
        }
        Err(e) => {
            eprintln!("polylim: {e:#}");
            ExitCode::from(e.downcast_ref::<Failure>().map_or(1, Failure::code))
        }
    }
}
