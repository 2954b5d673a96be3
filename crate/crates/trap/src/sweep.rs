//! Current and separation sweeps.
//!
//! Each sweep point is an independent characterisation; rows that fail
//! (no stable trap at low current, for instance) carry their error
//! instead of poisoning the whole table.

use crate::characterize::{characterize, TrapCharacterization};
use crate::config::TrapConfig;
use crate::TrapError;
use fluxtrap_magnetics::format_exp9;
use fluxtrap_numerics::{linear_fit, LinearFit};

use std::io::{self, Write};

pub const SWEEP_SCHEMA: &str =
    "I_A,fx_Hz,fy_Hz,fz_Hz,gradx_T_per_m,grady_T_per_m,gradz_T_per_m,zeta_x,zeta_y,zeta_z,Bhot_T";

#[derive(Debug)]
pub struct SweepRow {
    /// Swept parameter value: current (A) or separation (m).
    pub parameter: f64,
    pub result: Result<TrapCharacterization, TrapError>,
}

#[derive(Debug)]
pub struct SweepTable {
    /// CSV header name of the swept parameter column.
    pub parameter_name: &'static str,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn ok_rows(&self) -> impl Iterator<Item = (f64, &TrapCharacterization)> {
        self.rows
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(|c| (r.parameter, c)))
    }

    /// Straight-line fits of (f_x, f_y, f_z) against the swept parameter
    /// over the successful rows.
    pub fn frequency_linearity(&self) -> [LinearFit; 3] {
        let xs: Vec<f64> = self.ok_rows().map(|(p, _)| p).collect();
        std::array::from_fn(|i| {
            let ys: Vec<f64> = self.ok_rows().map(|(_, c)| c.frequencies[i]).collect();
            linear_fit(&xs, &ys)
        })
    }
}

/// Characterise the trap at each current (applied to both coils).
/// Gravity is taken from `cfg`; pass a zero-gravity config for
/// linearity checks.
pub fn current_sweep(cfg: &TrapConfig, currents: &[f64]) -> SweepTable {
    let rows = currents
        .iter()
        .map(|&i| SweepRow {
            parameter: i,
            result: characterize(&cfg.with_currents(i, i)),
        })
        .collect();
    SweepTable {
        parameter_name: "I_A",
        rows,
    }
}

/// Characterise the trap at each face-to-face separation, at the
/// currents already set in `cfg`.
pub fn separation_sweep(cfg: &TrapConfig, separations: &[f64]) -> SweepTable {
    let rows = separations
        .iter()
        .map(|&d| SweepRow {
            parameter: d,
            result: cfg.with_separation(d).and_then(|c| characterize(&c)),
        })
        .collect();
    SweepTable {
        parameter_name: "d_m",
        rows,
    }
}

/// Sweep CSV; failed rows are skipped (their errors are reported by the
/// caller through the table itself).
pub fn write_sweep_csv<W: Write>(table: &SweepTable, mut w: W) -> io::Result<()> {
    let schema = SWEEP_SCHEMA.replacen("I_A", table.parameter_name, 1);
    writeln!(w, "# schema={schema}")?;
    writeln!(w, "{schema}")?;
    for (p, c) in table.ok_rows() {
        let cells: Vec<String> = std::iter::once(p)
            .chain(c.frequencies)
            .chain(c.gradients)
            .chain(c.zetas)
            .chain(std::iter::once(c.b_hot))
            .map(format_exp9)
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}
