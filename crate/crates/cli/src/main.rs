mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use diatherm::{catalog, Error, PhysicalConstants};

use args::{Cli, Command};
use commands::Context;

/// Exit codes: 1 for failed checks or numerical failure, 2 for usage and configuration.
pub struct Failure {
    code: u8,
    error: Option<anyhow::Error>,
}

impl Failure {
    pub fn usage(error: anyhow::Error) -> Self {
        Self {
            code: 2,
            error: Some(error),
        }
    }

    pub fn compute(error: anyhow::Error) -> Self {
        Self {
            code: 1,
            error: Some(error),
        }
    }

    /// Failed checks were already reported.
    pub fn validation(_failed: usize) -> Self {
        Self {
            code: 1,
            error: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownMolecule(_)
            | Error::InvalidMolecule { .. }
            | Error::CatalogParse { .. }
            | Error::Io { .. }
            | Error::InvalidDeformation(_)
            | Error::LevelOutOfRange { .. }
            | Error::NoReferenceData(_)
            | Error::Domain(_) => 2,
            _ => 1,
        };
        Self {
            code,
            error: Some(e.into()),
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let catalog = catalog::resolve_catalog(cli.catalog.as_deref())?;
    let ctx = Context {
        catalog: &catalog,
        constants: PhysicalConstants::default(),
        out: cli.out.as_deref(),
    };
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Lambdamax(a) => commands::lambdamax(&ctx, a),
        Command::Thermo(a) => commands::thermo(&ctx, a),
        Command::Sweep(a) => commands::sweep(&ctx, a),
        Command::Wavefunction(a) => commands::wavefunction(&ctx, a),
        Command::Validate(a) => commands::validate_cmd(&ctx, a),
        Command::Calibrate(a) => commands::calibrate_cmd(&ctx, a),
        Command::Diagnostics(a) => commands::diagnostics(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(e) = f.error {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(f.code)
        }
    }
}
