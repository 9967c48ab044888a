mod commands;
mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::CmdError;
use crate::config::Options;

/// Wigner d asymptotics, loop-state fields and torus integrands.
#[derive(Parser, Debug)]
#[command(name = "cohloop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Exact vs asymptotic d^j_{m2 m1}(beta).
    Wigner,
    /// Fibrewise norm of a loop state or coherent state on a theta-phi grid.
    Field,
    /// Magnitude and phase of the coherent-state pairing over the torus.
    Torus,
    /// Run the invariant suite and print a JSON report.
    Verify,
}

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn output(opts: &Options) -> io::Result<Box<dyn Write>> {
    Ok(match &opts.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, (u8, String)> {
    let opts = match &cli.config {
        Some(path) => Options::from_file(path).map_err(|e| (EXIT_CONFIG, e.to_string()))?.overlay(&cli.opts),
        None => cli.opts.clone(),
    };
    let fail = |e: CmdError| match e {
        CmdError::Config(c) => (EXIT_CONFIG, c.to_string()),
        CmdError::Compute(c) => (EXIT_INVARIANT, c.to_string()),
    };
    let io_fail = |e: io::Error| (EXIT_CONFIG, format!("cannot write output: {e}"));
    let table = match cli.command {
        Command::Wigner => commands::wigner(&opts),
        Command::Field => commands::field(&opts),
        Command::Torus => commands::torus(&opts),
        Command::Verify => {
            let report = commands::verify(&opts).map_err(fail)?;
            let mut out = output(&opts).map_err(io_fail)?;
            serde_json::to_writer_pretty(&mut out, &report).map_err(|e| io_fail(e.into()))?;
            writeln!(out).and_then(|_| out.flush()).map_err(io_fail)?;
            for o in report.outcomes.iter().filter(|o| !o.passed) {
                let why = o.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
                eprintln!("FAIL {}: defect {:e} > {:e}{why}", o.name, o.defect, o.tolerance);
            }
            return Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVARIANT) });
        }
    }
    .map_err(fail)?;
    let mut out = output(&opts).map_err(io_fail)?;
    table.write(opts.format(), &mut out).and_then(|_| out.flush()).map_err(io_fail)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
