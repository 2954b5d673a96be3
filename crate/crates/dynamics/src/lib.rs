//! Particle-motion time series: ringdowns, spectra, video tracking.
//!
//! Generates driven-then-released ringdowns, fits damped sinusoids and
//! extracts quality factors, estimates power spectral densities by
//! Welch averaging, and tracks particle centroids through synthetic
//! frame stacks.

pub mod psd;
pub mod ringdown;
pub mod synthetic;
pub mod timeseries;
pub mod tracking;

pub use psd::{psd, Psd};
pub use ringdown::{
    fit_ringdown, fit_ringdown_from, quality_factor, simulate_ringdown, RingdownFit, RingdownSpec,
};
pub use synthetic::render_spot_stack;
pub use timeseries::TimeSeries;
pub use tracking::{track_centroid, FrameStack, Roi};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("sample rate {sample_rate} Hz undersamples f0 = {f0} Hz (need > 10 f0)")]
    Undersampled { sample_rate: f64, f0: f64 },
    #[error("series too short: {len} samples, need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("no oscillation: spectral peak is only {ratio:.2}x the median level")]
    NoOscillation { ratio: f64 },
    #[error("fit did not converge: {0}")]
    FitNotConverged(String),
    #[error("region of interest is empty after background subtraction")]
    EmptyRoi,
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
