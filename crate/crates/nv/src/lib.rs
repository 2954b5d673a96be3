//! NV-centre ODMR magnetometry: forward modelling and inversion.
//!
//! The ground-state spin-1 Hamiltonian with zero-field splitting D and
//! Zeeman coupling gamma B.S is diagonalised per NV orientation; the
//! four-orientation geometry of a (100)-cut diamond turns the resulting
//! transition frequencies into fluorescence-dip spectra, and the inverse
//! path fits Lorentzian dips and solves for the field magnitude or full
//! vector.

pub mod diamond;
pub mod fit;
pub mod invert;
pub mod optics;
pub mod spectrum;
pub mod spin;
pub mod zeeman;

pub use diamond::DiamondCut100;
pub use fit::{fit_lorentzians, OdmrLine};
pub use invert::{
    invert_field_magnitude, reconstruct_field_vector, Branch, FieldEstimate, ObservedTransition,
};
pub use optics::{axial_resolution, gradient_broadened_linewidth, rabi_rate};
pub use spectrum::{odmr_forward, OdmrSpectrum};
pub use spin::{hamiltonian, SpinOperators};
pub use zeeman::{transition_frequencies, TransitionPair, ZeemanModel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NvError {
    #[error("orientation vector must be unit length (|n| = {norm})")]
    NonUnitOrientation { norm: f64 },
    #[error("fit did not converge: {0}")]
    FitNotConverged(String),
    #[error("found {found} dips, {requested} requested")]
    FewerDipsThanRequested { found: usize, requested: usize },
    #[error("no field magnitude up to {cap} T reproduces the observed splitting {splitting} Hz")]
    NoSolution { splitting: f64, cap: f64 },
    #[error("need at least 3 transitions spanning 2 orientations, got {transitions} over {orientations}")]
    Underdetermined {
        transitions: usize,
        orientations: usize,
    },
    #[error("orientation label {label} is outside the four-orientation family")]
    BadOrientationLabel { label: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
