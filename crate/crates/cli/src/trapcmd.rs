//! `trap` and `sweep`: characterisation reports and parameter sweeps.

use crate::config::{parse_field_with_unit, parse_range, Config};
use crate::output::write_atomic;
use crate::CliError;
use clap::Args;
use fluxtrap_numerics::format_exp9;
use fluxtrap_trap::{
    bc1_breach_current, characterize, write_sweep_csv, SweepRow, SweepTable, TrapError,
};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Args)]
pub struct TrapArgs {
    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Lower critical field with unit suffix (e.g. 173.5mT); adds a
    /// breach-current line to the report.
    #[arg(long)]
    pub bc1: Option<String>,
}

pub fn run_trap(config: &Config, args: &TrapArgs) -> Result<(), CliError> {
    let cfg = config
        .trap_config()
        .map_err(|e| CliError::config(e.to_string()))?;
    let characterization = characterize(&cfg).map_err(map_trap_error)?;
    let mut report = characterization.key_value_report();
    if let Some(bc1_text) = &args.bc1 {
        let b_c1 = parse_field_with_unit(bc1_text).map_err(|e| CliError::config(e.to_string()))?;
        let breach = bc1_breach_current(&cfg, b_c1).map_err(map_trap_error)?;
        report.push_str(&format!("bc1_breach_current_a={}\n", format_exp9(breach)));
    }
    emit_report(&report, args.out.as_deref())
}

#[derive(Args)]
pub struct SweepArgs {
    /// Current sweep `min:max:count` in amperes (both coils together).
    #[arg(long, conflicts_with = "separation")]
    pub current: Option<String>,

    /// Separation sweep `min:max:count` in metres, at the configured currents.
    #[arg(long)]
    pub separation: Option<String>,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Report file for fit statistics; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Lower critical field with unit suffix; adds a breach-current line.
    #[arg(long)]
    pub bc1: Option<String>,
}

pub fn run_sweep(config: &Config, args: &SweepArgs) -> Result<(), CliError> {
    let cfg = config
        .trap_config()
        .map_err(|e| CliError::config(e.to_string()))?;

    let table = match (&args.current, &args.separation) {
        (Some(spec), None) => {
            let currents = parse_range(spec).map_err(|e| CliError::config(e.to_string()))?;
            parallel_sweep(&currents, "I_A", |&i| {
                characterize(&cfg.with_currents(i, i))
            })
        }
        (None, Some(spec)) => {
            let separations = parse_range(spec).map_err(|e| CliError::config(e.to_string()))?;
            parallel_sweep(&separations, "d_m", |&d| {
                cfg.with_separation(d).and_then(|c| characterize(&c))
            })
        }
        _ => {
            return Err(CliError::config(
                "exactly one of --current or --separation is required",
            ))
        }
    };

    if table.ok_rows().count() == 0 {
        let first_err = table
            .rows
            .iter()
            .find_map(|r| r.result.as_ref().err())
            .map(|e| e.to_string())
            .unwrap_or_else(|| "empty sweep".into());
        return Err(map_trap_message(first_err));
    }

    let mut buf = Vec::new();
    write_sweep_csv(&table, &mut buf).map_err(CliError::io)?;
    write_atomic(&args.out, &buf).map_err(CliError::io)?;

    // fit statistics: the frequency-current relation is the linearity
    // diagnostic; separation sweeps report the same fits against d
    let fits = table.frequency_linearity();
    let mut report = String::new();
    for (name, fit) in ["fx", "fy", "fz"].iter().zip(fits) {
        report.push_str(&format!(
            "{name}_slope={}\n{name}_intercept={}\n{name}_r2={:.9}\n",
            format_exp9(fit.slope),
            format_exp9(fit.intercept),
            fit.r_squared
        ));
    }
    for row in &table.rows {
        if let Err(e) = &row.result {
            report.push_str(&format!("skipped={} reason={}\n", row.parameter, e));
        }
    }
    if let Some(bc1_text) = &args.bc1 {
        let b_c1 = parse_field_with_unit(bc1_text).map_err(|e| CliError::config(e.to_string()))?;
        let breach = bc1_breach_current(&cfg, b_c1).map_err(map_trap_error)?;
        report.push_str(&format!("bc1_breach_current_a={}\n", format_exp9(breach)));
    }
    emit_report(&report, args.report.as_deref())
}

/// Characterise sweep points in parallel, preserving input order.
fn parallel_sweep<F>(parameters: &[f64], name: &'static str, f: F) -> SweepTable
where
    F: Fn(&f64) -> Result<fluxtrap_trap::TrapCharacterization, TrapError> + Sync,
{
    let rows: Vec<SweepRow> = parameters
        .par_iter()
        .map(|p| SweepRow {
            parameter: *p,
            result: f(p),
        })
        .collect();
    SweepTable {
        parameter_name: name,
        rows,
    }
}

fn emit_report(report: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, report.as_bytes()).map_err(CliError::io),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn map_trap_error(e: TrapError) -> CliError {
    match e {
        TrapError::Field(f) => CliError::singularity(f.to_string()),
        other => CliError::no_trap(other.to_string()),
    }
}

fn map_trap_message(message: String) -> CliError {
    if message.contains("singular") || message.contains("filament") {
        CliError::singularity(message)
    } else {
        CliError::no_trap(message)
    }
}
