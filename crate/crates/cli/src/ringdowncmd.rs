//! `ringdown`: fit a motion record from CSV or a frame-stack directory.

use crate::config::Config;
use crate::output::write_atomic;
use crate::CliError;
use clap::Args;
use fluxtrap_dynamics::{
    fit_ringdown, fit_ringdown_from, psd, track_centroid, DynamicsError, FrameStack, TimeSeries,
};
use fluxtrap_numerics::format_exp9;
use std::path::PathBuf;

pub const PSD_SCHEMA: &str = "freq_Hz,psd_m2_per_Hz";

#[derive(Args)]
pub struct RingdownArgs {
    /// Time-series CSV (`t_s,x_m`) or a frame-stack directory
    /// (PGM frames plus a `meta` file).
    #[arg(long)]
    pub input: PathBuf,

    /// Fit report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Welch PSD CSV path (optional).
    #[arg(long)]
    pub psd_out: Option<PathBuf>,

    /// Sample index where the ringdown starts; auto-detected when omitted.
    #[arg(long)]
    pub start_index: Option<usize>,
}

pub fn run(config: &Config, args: &RingdownArgs) -> Result<(), CliError> {
    let series = load_series(config, &args.input)?;

    let fit = match args.start_index {
        Some(start) => fit_ringdown_from(&series, start),
        None => fit_ringdown(&series),
    }
    .map_err(map_dynamics_error)?;

    if let Some(psd_path) = &args.psd_out {
        let segment = config.analysis.psd_segment_length.min(series.len());
        let spectrum =
            psd(&series, segment, config.analysis.psd_overlap).map_err(map_dynamics_error)?;
        let mut text = format!("# schema={PSD_SCHEMA}\n{PSD_SCHEMA}\n");
        for (f, p) in spectrum.frequencies.iter().zip(&spectrum.power) {
            text.push_str(&format!("{},{}\n", format_exp9(*f), format_exp9(*p)));
        }
        write_atomic(psd_path, text.as_bytes()).map_err(CliError::io)?;
    }

    let report = fit.key_value_report();
    match &args.out {
        Some(path) => write_atomic(path, report.as_bytes()).map_err(CliError::io),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

/// A CSV file is read directly; a directory is tracked first, keeping
/// the axis with the larger motion variance.
fn load_series(config: &Config, input: &PathBuf) -> Result<TimeSeries, CliError> {
    if input.is_dir() {
        let stack = FrameStack::read_dir(input).map_err(map_dynamics_error)?;
        let roi = stack.full_roi();
        let (x, y) = track_centroid(&stack, roi, config.analysis.background_percentile)
            .map_err(map_dynamics_error)?;
        Ok(if x.variance() >= y.variance() { x } else { y })
    } else {
        let file = std::fs::File::open(input).map_err(CliError::io)?;
        TimeSeries::read_csv(std::io::BufReader::new(file)).map_err(map_dynamics_error)
    }
}

fn map_dynamics_error(e: DynamicsError) -> CliError {
    match e {
        DynamicsError::NoOscillation { .. } => CliError::no_oscillation(e.to_string()),
        DynamicsError::FitNotConverged(_) => CliError::fit(e.to_string()),
        DynamicsError::Io(io) => CliError::io(io),
        other => CliError::config(other.to_string()),
    }
}
