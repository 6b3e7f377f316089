//! `hadamard-weak`: runs one experiment from a JSON config and writes a JSON
//! or CSV report.
//!
//! Exit status: 0 on success, 1 when the experiment found a verified
//! counterexample it did not expect, 2 on input or precondition errors.

mod config;
mod error;
mod experiments;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Experiment, Format, Overrides, ResolvedConfig};
use error::{input, CliError};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "hadamard-weak", version, about = "Weak-topology experiments on Hadamard model spaces")]
struct Cli {
    experiment: Experiment,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Report path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn write_report(report: &Report, format: Format, mut out: impl Write) -> io::Result<()> {
    match format {
        Format::Json => report.write_json(&mut out)?,
        Format::Csv => report.write_csv(&mut out)?,
    }
    out.flush()
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input(format!("cannot start thread pool: {e}")))?;
    }
    let overrides = Overrides {
        seed: cli.seed,
        output: cli.output,
        format: cli.format,
    };
    let mut cfg = ResolvedConfig::load(&cli.config, cli.experiment, overrides)?;
    let outcome = experiments::run(&mut cfg)?;
    let (format, output) = (cfg.format, cfg.output.clone());
    let report = Report::new(cfg, outcome);
    let written = match &output {
        Some(path) => File::create(path).and_then(|f| write_report(&report, format, BufWriter::new(f))),
        None => write_report(&report, format, io::stdout().lock()),
    };
    written.map_err(|source| CliError::Output {
        path: output.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    })?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
