//! `hcl`: generate hypergraphs, build containers, verify covers and compute degree measures.
//!
//! Exit codes: 0 success, 1 other errors, 2 invalid parameters, 3 hypothesis not
//! satisfied, 4 a limit was reached, 5 some maximal independent set is uncovered.

mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use args::{Cli, Command};
use commands::{Exit, HYPOTHESIS, INVALID, LIMITS};
use manifest::{read_manifest, Recorder};

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Exit>() {
        return e.code;
    }
    if let Some(e) = err.downcast_ref::<hcl_core::Error>() {
        use hcl_core::Error::*;
        return match e {
            HypothesisFailed(_) => HYPOTHESIS,
            LimitExceeded(_) => LIMITS,
            InvalidParameter(_) | EmptyHypergraph | UniformityMismatch { .. } | VertexCountMismatch(..) | VertexOutOfRange { .. } => INVALID,
            _ => 1,
        };
    }
    1
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("HCL_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Exit { code: INVALID, message: format!("HCL_THREADS must be a positive integer, got {v:?}") })?;
        if n == 0 {
            bail!(Exit { code: INVALID, message: "HCL_THREADS must be positive".into() });
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Runs one command. Commands with an output file leave a manifest next to it,
/// also when they fail after the hypothesis check.
fn run(cli: Cli, argv: Vec<String>) -> Result<u8> {
    let human = cli.human;
    match cli.command {
        Command::Gen(a) => {
            let mut rec = Recorder::new(&argv, "gen");
            commands::gen(&a, &mut rec)?;
            rec.finish(&a.out, 0)?;
            Ok(0)
        }
        Command::Contain(a) => {
            let mut rec = Recorder::new(&argv, "contain");
            let res = commands::contain(&a, &mut rec, human);
            let code = res.as_ref().err().map_or(0, exit_code);
            if code == 0 || code == HYPOTHESIS || code == LIMITS {
                rec.finish(&a.out, code)?;
            }
            res.map(|_| 0)
        }
        Command::Verify(a) => {
            let mut rec = Recorder::new(&argv, "verify");
            let (text, code) = commands::verify(&a, &mut rec)?;
            match &a.out {
                Some(out) => rec.finish(out, code)?,
                None => emit(&text)?,
            }
            Ok(code)
        }
        Command::Measure(a) => {
            let mut rec = Recorder::new(&argv, "measure");
            let text = commands::measure(&a, &mut rec, human)?;
            match &a.out {
                Some(out) => rec.finish(out, 0)?,
                None => emit(&text)?,
            }
            Ok(0)
        }
        Command::Replay { manifest } => replay(&manifest),
    }
}

fn replay(path: &Path) -> Result<u8> {
    let m = read_manifest(path)?;
    let mut full = vec!["hcl".to_string()];
    full.extend(m.command.iter().cloned());
    let cli = Cli::try_parse_from(&full).map_err(|e| Exit { code: INVALID, message: format!("manifest command does not parse: {e}") })?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!(Exit { code: INVALID, message: "a manifest cannot replay another replay".into() });
    }
    run(cli, m.command)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(cli, argv));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
