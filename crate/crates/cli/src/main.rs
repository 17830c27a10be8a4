//! `ncup`: command-line front end for `ncup-core`.
//!
//! Exit codes: 0 when every check holds, 1 when a mathematical check fails
//! (the report's `status` says whether that is an implementation defect or a
//! conjecture counterexample), 2 for invalid input.

mod args;
mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Output};
use commands::Outcome;
use input::Failure;

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("NCUP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::input(format!("NCUP_THREADS: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            message: format!("NCUP_THREADS: {e}"),
        })
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("--out {}: cannot write: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let (outcome, output): (Outcome, &Output) = match &cli.command {
        Command::Certify(a) => (commands::certify_cmd(a)?, &a.output),
        Command::Coherence(a) => (commands::coherence_cmd(a)?, &a.output),
        Command::Parsevalize(a) => (commands::parsevalize_cmd(a)?, &a.output),
        Command::Audit(a) => (commands::audit_cmd(a)?, &a.output),
        Command::Tao(a) => (commands::tao_cmd(a)?, &a.output),
        Command::Conjecture(a) => (commands::conjecture_cmd(a)?, &a.output),
        Command::Frame(a) => (commands::frame_cmd(a)?, &a.output),
        Command::Vector(a) => (commands::vector_cmd(a)?, &a.output),
    };
    emit(output, &outcome.text)?;
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
