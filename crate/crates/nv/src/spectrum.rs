//! Forward ODMR spectra.

use crate::diamond::DiamondCut100;
use crate::zeeman::{transition_frequencies, ZeemanModel};
use crate::NvError;
use fluxtrap_magnetics::Vec3;

/// A sampled fluorescence-versus-frequency trace, baseline near one.
#[derive(Clone, Debug)]
pub struct OdmrSpectrum {
    /// Hz, strictly ascending.
    pub frequencies: Vec<f64>,
    /// Normalised fluorescence, in (0, 1.05].
    pub signal: Vec<f64>,
    /// Hz, full width at half maximum used to synthesise or fit.
    pub linewidth: f64,
    /// Fractional dip depth budget of the synthesis.
    pub contrast: f64,
}

impl OdmrSpectrum {
    pub fn new(
        frequencies: Vec<f64>,
        signal: Vec<f64>,
        linewidth: f64,
        contrast: f64,
    ) -> Result<Self, NvError> {
        if frequencies.len() != signal.len() || frequencies.len() < 2 {
            return Err(NvError::InvalidInput(
                "spectrum needs matching frequency/signal arrays of length >= 2".into(),
            ));
        }
        if !frequencies.windows(2).all(|w| w[1] > w[0]) {
            return Err(NvError::InvalidInput(
                "frequency grid must be strictly ascending".into(),
            ));
        }
        if signal.iter().any(|&s| !(s > 0.0 && s <= 1.05)) {
            return Err(NvError::InvalidInput(
                "signal must stay within (0, 1.05]".into(),
            ));
        }
        Ok(Self {
            frequencies,
            signal,
            linewidth,
            contrast,
        })
    }

    pub fn grid_step(&self) -> f64 {
        (self.frequencies[self.frequencies.len() - 1] - self.frequencies[0])
            / (self.frequencies.len() - 1) as f64
    }
}

/// Unit-peak Lorentzian with full width at half maximum `fwhm`.
pub fn lorentzian(f: f64, center: f64, fwhm: f64) -> f64 {
    let half = 0.5 * fwhm;
    half * half / ((f - center) * (f - center) + half * half)
}

/// Synthesise the four-orientation ODMR spectrum of a lab-frame field.
///
/// Each of the eight transitions (four orientations, two branches)
/// contributes an equal-weight dip of depth contrast/8, per the
/// equal-projection geometry of the (100) cut.
pub fn odmr_forward(
    zm: &ZeemanModel,
    b_lab: Vec3,
    cut: &DiamondCut100,
    linewidth: f64,
    contrast: f64,
    grid: &[f64],
) -> Result<OdmrSpectrum, NvError> {
    if linewidth <= 0.0 {
        return Err(NvError::InvalidInput("linewidth must be positive".into()));
    }
    if !(contrast > 0.0 && contrast <= 0.3) {
        return Err(NvError::InvalidInput(
            "contrast must lie in (0, 0.3]".into(),
        ));
    }
    let mut centers = Vec::with_capacity(8);
    for axis in cut.axes() {
        let pair = transition_frequencies(zm, b_lab, *axis)?;
        centers.push(pair.lower);
        centers.push(pair.upper);
    }
    let signal: Vec<f64> = grid
        .iter()
        .map(|&f| {
            let dips: f64 = centers
                .iter()
                .map(|&c| contrast / 8.0 * lorentzian(f, c, linewidth))
                .sum();
            1.0 - dips
        })
        .collect();
    OdmrSpectrum::new(grid.to_vec(), signal, linewidth, contrast)
}

/// Uniform frequency grid helper, Hz.
pub fn frequency_grid(min_hz: f64, max_hz: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && max_hz > min_hz);
    (0..points)
        .map(|i| min_hz + (max_hz - min_hz) * i as f64 / (points - 1) as f64)
        .collect()
}
