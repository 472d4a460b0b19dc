mod cli;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;
use crate::commands::Context;
use crate::error::CliError;
use crate::output::Provenance;

fn real_main(cli: &Cli) -> Result<Option<String>, CliError> {
    let ctx = Context::new(&cli.config)?;
    if let Some(t) = cli.config.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let report = commands::run(&cli.command, &ctx)?;
    let prov = Provenance { precision_bits: ctx.precision_bits, seed: ctx.seed, tol: ctx.tol };
    output::emit(&report, cli.config.output, prov, cli.config.out.as_deref())?;
    Ok(report.check_failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("brjuno: {e}");
            e.exit_code()
        }
    }
}
