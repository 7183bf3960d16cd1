//! `tscausal`: directed-dependence analysis for CSV time series.
//!
//! Every run is a pure function of its flags and `--seed`: reports in
//! JSON-lines form are byte-identical across repeats, platforms, and thread
//! counts. Exit codes: 0 success, 1 usage error, 2 data error, 3 partial
//! estimator failure (some pairs failed; their records carry warnings).

mod args;
mod bench;
mod csvio;
mod error;
mod record;
mod runner;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::{CliError, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE};
use runner::RunOutcome;

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn report(outcome: RunOutcome, output: &Option<PathBuf>, format: record::Format) -> Result<u8, CliError> {
    let mut out = open_output(output)?;
    record::emit_report(&outcome.records, format, &mut out)?;
    out.flush()?;
    Ok(if outcome.any_failed { EXIT_PARTIAL } else { EXIT_OK })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Corr(a) => report(runner::run_corr(&a)?, &a.io.output, a.io.format),
        Command::Gc(a) => report(runner::run_gc(&a)?, &a.io.output, a.io.format),
        Command::Te(a) => report(runner::run_te(&a)?, &a.io.output, a.io.format),
        Command::Ccc(a) => report(runner::run_ccc(&a)?, &a.io.output, a.io.format),
        Command::Ccm(a) => report(runner::run_ccm(&a)?, &a.io.output, a.io.format),
        Command::Synth(a) => {
            let summary = runner::run_synth(&a)?;
            println!("{summary}");
            Ok(EXIT_OK)
        }
        Command::Bench(a) => {
            let records = bench::run_bench(&a)?;
            let mut out = open_output(&a.output)?;
            bench::emit_bench(&records, a.format, &mut out)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            e.print().expect("command-line error must be printable");
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
