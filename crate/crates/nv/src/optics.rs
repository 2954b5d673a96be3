//! Optical-detection side effects: Rabi rate, gradient broadening,
//! axial resolution.

use crate::zeeman::ZeemanModel;

/// Rabi flopping rate of a resonant drive field, Hz: Omega = gamma B1.
pub fn rabi_rate(zm: &ZeemanModel, b1: f64) -> f64 {
    assert!(b1 >= 0.0, "drive amplitude must be non-negative");
    zm.gyromagnetic_ratio_hz_per_t * b1
}

/// Gradient-broadened linewidth, Hz.
///
/// Additive box-broadening approximation: the sampled depth `dz` sees a
/// field spread |dB/dz| dz, smearing each line by gamma times that on
/// top of the intrinsic width. An approximation to the true convolution
/// over the collection depth.
pub fn gradient_broadened_linewidth(base: f64, db_dz: f64, dz: f64, zm: &ZeemanModel) -> f64 {
    assert!(base >= 0.0 && dz >= 0.0, "widths and depths are non-negative");
    base + zm.gyromagnetic_ratio_hz_per_t * db_dz.abs() * dz
}

/// Diffraction-limited axial resolution of a confocal collection path,
/// m: dz = 2 n lambda / NA^2.
pub fn axial_resolution(refractive_index: f64, wavelength: f64, numerical_aperture: f64) -> f64 {
    assert!(
        refractive_index >= 1.0 && wavelength > 0.0,
        "need n >= 1 and a positive wavelength"
    );
    assert!(
        numerical_aperture > 0.0 && numerical_aperture <= 1.0,
        "NA must lie in (0, 1]"
    );
    2.0 * refractive_index * wavelength / (numerical_aperture * numerical_aperture)
}
