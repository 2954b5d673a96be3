//! `odmr`: synthesise, fit or sweep NV spectra against the coil model.

use crate::config::Config;
use crate::output::write_atomic;
use crate::CliError;
use clap::Args;
use fluxtrap_magnetics::{Assembly, Source, Vec3};
use fluxtrap_numerics::format_exp9;
use fluxtrap_nv::spectrum::frequency_grid;
use fluxtrap_nv::{
    fit_lorentzians, invert_field_magnitude, odmr_forward, DiamondCut100, NvError, OdmrSpectrum,
    ZeemanModel,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::BufRead;
use std::path::PathBuf;

pub const SPECTRUM_SCHEMA: &str = "freq_Hz,signal";
pub const FIT_SCHEMA: &str = "center_Hz,fwhm_Hz,depth,center_err_Hz";
pub const HEATMAP_SCHEMA: &str = "current_A,freq_Hz,signal";

#[derive(Args)]
pub struct OdmrArgs {
    /// What to do: synthesise a spectrum, fit one, or sweep the coil
    /// current into a heatmap.
    #[arg(long, value_parser = ["simulate", "fit", "sweep"])]
    pub mode: String,

    /// Input spectrum CSV (fit mode).
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Output CSV path (spectrum, fit report or heatmap).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Override: simulate a pure lab-z field of this magnitude (T)
    /// instead of evaluating the coil model.
    #[arg(long)]
    pub field_t: Option<f64>,

    /// Sweep upper current, A (sweep mode).
    #[arg(long, default_value_t = 0.5)]
    pub sweep_max_a: f64,

    /// Sweep point count (sweep mode).
    #[arg(long, default_value_t = 11)]
    pub sweep_points: usize,
}

pub fn run(config: &Config, args: &OdmrArgs) -> Result<(), CliError> {
    match args.mode.as_str() {
        "simulate" => simulate(config, args),
        "fit" => fit(config, args),
        "sweep" => sweep(config, args),
        other => Err(CliError::config(format!("unknown mode {other}"))),
    }
}

fn zeeman(config: &Config) -> ZeemanModel {
    ZeemanModel::new(config.nv.d_hz, config.nv.gamma_hz_per_t)
}

/// Field at the ODMR sampling point: on the coil axis, `sample_height_m`
/// above the concentrator's inner-loop plane.
fn sample_field(config: &Config) -> Result<Vec3, CliError> {
    let fc = config
        .single_concentrator()
        .map_err(|e| CliError::config(e.to_string()))?;
    let p = fc.drive.center + fc.drive.axis * (fc.bore_plane_offset() + config.nv.sample_height_m);
    let assembly = Assembly::from_sources(vec![Source::Concentrator(fc)]);
    assembly
        .field_at(p)
        .map_err(|e| CliError::singularity(e.to_string()))
}

fn synthesise(config: &Config, b_lab: Vec3, seed_offset: u64) -> Result<OdmrSpectrum, CliError> {
    let grid = frequency_grid(
        config.nv.grid_min_hz,
        config.nv.grid_max_hz,
        config.nv.grid_points,
    );
    let mut spec = odmr_forward(
        &zeeman(config),
        b_lab,
        &DiamondCut100::default(),
        config.nv.linewidth_hz,
        config.nv.contrast,
        &grid,
    )
    .map_err(|e| CliError::config(e.to_string()))?;
    if config.nv.noise_fraction > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.analysis.seed.wrapping_add(seed_offset));
        for s in &mut spec.signal {
            let (u1, u2): (f64, f64) = (rng.random_range(1e-12..1.0), rng.random_range(0.0..1.0));
            let gauss = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            *s = (*s + config.nv.noise_fraction * gauss).clamp(1e-6, 1.05);
        }
    }
    Ok(spec)
}

fn simulate(config: &Config, args: &OdmrArgs) -> Result<(), CliError> {
    let b_lab = match args.field_t {
        Some(b) => Vec3::new(0.0, 0.0, b),
        None => sample_field(config)?,
    };
    let spec = synthesise(config, b_lab, 0)?;
    let mut text = format!("# schema={SPECTRUM_SCHEMA}\n{SPECTRUM_SCHEMA}\n");
    for (f, s) in spec.frequencies.iter().zip(&spec.signal) {
        text.push_str(&format!("{},{}\n", format_exp9(*f), format_exp9(*s)));
    }
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes()).map_err(CliError::io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fit(config: &Config, args: &OdmrArgs) -> Result<(), CliError> {
    let input = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::config("fit mode needs --input"))?;
    let file = std::fs::File::open(input).map_err(CliError::io)?;
    let spec = read_spectrum_csv(
        std::io::BufReader::new(file),
        config.nv.linewidth_hz,
        config.nv.contrast,
    )?;

    let lines = fit_lorentzians(&spec, config.analysis.odmr_dips).map_err(map_fit_error)?;
    let mut text = format!("# schema={FIT_SCHEMA}\n{FIT_SCHEMA}\n");
    for line in &lines {
        text.push_str(&format!(
            "{},{},{},{}\n",
            format_exp9(line.center_hz),
            format_exp9(line.fwhm_hz),
            format_exp9(line.depth),
            format_exp9(line.center_err_hz)
        ));
    }
    if let Some(path) = &args.out {
        write_atomic(path, text.as_bytes()).map_err(CliError::io)?;
    } else {
        print!("{text}");
    }

    // field estimate from the outermost pair, assuming an out-of-plane
    // field on the (100) cut
    let (lower, upper) = (
        lines.first().expect("at least one dip").center_hz,
        lines.last().expect("at least one dip").center_hz,
    );
    let estimate = invert_field_magnitude(
        &zeeman(config),
        lower,
        upper,
        fluxtrap_nv::invert::default_inversion_angle(),
    )
    .map_err(map_fit_error)?;
    println!("field_magnitude_T={}", format_exp9(estimate.magnitude));
    println!("field_uncertainty_T={}", format_exp9(estimate.uncertainty));
    Ok(())
}

fn sweep(config: &Config, args: &OdmrArgs) -> Result<(), CliError> {
    if args.sweep_points < 2 || args.sweep_max_a <= 0.0 {
        return Err(CliError::config("sweep needs at least 2 points and a positive maximum"));
    }
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::config("sweep mode needs --out"))?;
    // the field is homogeneous degree one in the drive current, so one
    // evaluation serves every sweep point
    let reference = sample_field(config)?;
    let reference_current = config.coils.current_a;
    let mut text = format!("# schema={HEATMAP_SCHEMA}\n{HEATMAP_SCHEMA}\n");
    for k in 0..args.sweep_points {
        let current = args.sweep_max_a * k as f64 / (args.sweep_points - 1) as f64;
        let b = reference * (current / reference_current);
        let spec = synthesise(config, b, k as u64)?;
        for (f, s) in spec.frequencies.iter().zip(&spec.signal) {
            text.push_str(&format!(
                "{},{},{}\n",
                format_exp9(current),
                format_exp9(*f),
                format_exp9(*s)
            ));
        }
    }
    write_atomic(out, text.as_bytes()).map_err(CliError::io)
}

pub fn read_spectrum_csv<R: BufRead>(
    reader: R,
    linewidth_hint: f64,
    contrast_hint: f64,
) -> Result<OdmrSpectrum, CliError> {
    let mut freqs = Vec::new();
    let mut signal = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(CliError::io)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("freq_Hz") {
            continue;
        }
        let Some((f, s)) = trimmed.split_once(',') else {
            return Err(CliError::config(format!("bad spectrum row: {trimmed}")));
        };
        freqs.push(
            f.trim()
                .parse::<f64>()
                .map_err(|e| CliError::config(format!("bad frequency '{f}': {e}")))?,
        );
        signal.push(
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::config(format!("bad signal '{s}': {e}")))?,
        );
    }
    OdmrSpectrum::new(freqs, signal, linewidth_hint, contrast_hint)
        .map_err(|e| CliError::config(e.to_string()))
}

fn map_fit_error(e: NvError) -> CliError {
    CliError::fit(e.to_string())
}
