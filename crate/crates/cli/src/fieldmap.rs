//! `fieldmap`: sample the trap assembly on a plane.

use crate::config::{parse_range, Config};
use crate::output::write_atomic;
use crate::CliError;
use clap::Args;
use fluxtrap_magnetics::{FieldError, FieldMap, Vec3};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Args)]
pub struct FieldmapArgs {
    /// Sampling plane.
    #[arg(long, value_parser = ["xy", "xz", "yz"])]
    pub plane: String,

    /// Grid as `min:max:count,min:max:count` (m) for the two in-plane
    /// axes, in plane-name order.
    #[arg(long)]
    pub grid: String,

    /// Fixed coordinate of the plane along the remaining axis, m.
    #[arg(long, default_value_t = 0.0)]
    pub at: f64,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(config: &Config, args: &FieldmapArgs) -> Result<(), CliError> {
    let (spec_u, spec_v) = args
        .grid
        .split_once(',')
        .ok_or_else(|| CliError::config("grid needs two comma-separated ranges"))?;
    let us = parse_range(spec_u).map_err(|e| CliError::config(e.to_string()))?;
    let vs = parse_range(spec_v).map_err(|e| CliError::config(e.to_string()))?;

    let trap = config
        .trap_config()
        .map_err(|e| CliError::config(e.to_string()))?;
    let assembly = trap.assembly();

    // row-major points, u outer, v inner
    let to_point = |u: f64, v: f64| -> Vec3 {
        match args.plane.as_str() {
            "xy" => Vec3::new(u, v, args.at),
            "xz" => Vec3::new(u, args.at, v),
            _ => Vec3::new(args.at, u, v),
        }
    };
    let points: Vec<Vec3> = us
        .iter()
        .flat_map(|&u| vs.iter().map(move |&v| to_point(u, v)))
        .collect();

    let rows: Result<Vec<(Vec3, Vec3)>, FieldError> = points
        .par_iter()
        .map(|&p| assembly.field_at(p).map(|b| (p, b)))
        .collect();
    let rows = rows.map_err(|e| CliError::singularity(e.to_string()))?;

    let mut buf = Vec::new();
    FieldMap::from_rows(rows)
        .write_csv(&mut buf)
        .map_err(CliError::io)?;
    write_atomic(&args.out, &buf).map_err(CliError::io)?;
    Ok(())
}
