//! Command-line front end for the flux-concentrator levitation toolkit.
//!
//! Subcommands map onto the library crates: `fieldmap` samples the trap
//! field on a plane, `trap` characterises the levitation potential,
//! `sweep` tabulates eigenfrequencies against current or separation,
//! `odmr` synthesises/fits NV spectra and `ringdown` analyses motion
//! records. Exit codes: 2 config, 3 field singularity, 4 no stable
//! trap, 5 fit failure, 6 no oscillation.

mod config;
mod fieldmap;
mod odmr;
mod output;
mod ringdowncmd;
mod trapcmd;

use clap::{Parser, Subcommand};
use config::Config;
use std::path::PathBuf;
use std::process::ExitCode;

/// An error tagged with the process exit code it maps to.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
    pub fn singularity(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
    pub fn no_trap(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
    pub fn fit(message: impl Into<String>) -> Self {
        Self {
            code: 5,
            message: message.into(),
        }
    }
    pub fn no_oscillation(message: impl Into<String>) -> Self {
        Self {
            code: 6,
            message: message.into(),
        }
    }
    pub fn io(e: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("i/o error: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fluxtrap",
    about = "Magnetostatics, trap characterisation and NV/ringdown analysis for flux-concentrator levitation",
    version
)]
struct Cli {
    /// Configuration file (`[coils]`/`[trap]`/`[nv]`/`[analysis]` sections);
    /// defaults describe the reference setup when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for grids and sweeps (default: machine
    /// parallelism; MEISSNER_TRAP_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the trap field on a plane and write the field-map CSV.
    Fieldmap(fieldmap::FieldmapArgs),
    /// Characterise the trap: equilibrium, modes, gradients, hotspot.
    Trap(trapcmd::TrapArgs),
    /// Sweep coil current or separation and tabulate the eigenmodes.
    Sweep(trapcmd::SweepArgs),
    /// Synthesise, fit or sweep NV ODMR spectra.
    Odmr(odmr::OdmrArgs),
    /// Fit a ringdown record (CSV or frame-stack directory).
    Ringdown(ringdowncmd::RingdownArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli.threads.or_else(|| {
        std::env::var("MEISSNER_TRAP_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("warning: thread pool setup failed: {e}");
        }
    }

    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };

    let result = match cli.command {
        Command::Fieldmap(args) => fieldmap::run(&config, &args),
        Command::Trap(args) => trapcmd::run_trap(&config, &args),
        Command::Sweep(args) => trapcmd::run_sweep(&config, &args),
        Command::Odmr(args) => odmr::run(&config, &args),
        Command::Ringdown(args) => ringdowncmd::run(&config, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
