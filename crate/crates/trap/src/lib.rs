//! Anti-Helmholtz flux-concentrator trap characterisation.
//!
//! Two concentrator coils face each other across a gap with opposite
//! circulation; a superconducting microparticle in the Meissner state
//! sits in the resulting field minimum. This crate evaluates the
//! levitation potential, locates the equilibrium, extracts vibrational
//! eigenmodes and geometric factors, and runs current/separation sweeps.

pub mod bc1;
pub mod characterize;
pub mod config;
pub mod equilibrium;
pub mod particle;
pub mod potential;
pub mod sweep;

pub use bc1::bc1_breach_current;
pub use characterize::{characterize, hotspot_field, TrapCharacterization};
pub use config::{ConcentratorDims, TrapConfig};
pub use equilibrium::find_equilibrium;
pub use particle::Particle;
pub use potential::potential_energy;
pub use sweep::{current_sweep, separation_sweep, write_sweep_csv, SweepRow, SweepTable};

use fluxtrap_magnetics::{FieldError, GeometryError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrapError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("no potential minimum inside the inter-coil gap (every restart left the search region)")]
    NoMinimum,
    #[error("equilibrium is a saddle point: Hessian eigenvalue {eigenvalue:.3e} J/m^2 is not positive")]
    SaddlePoint { eigenvalue: f64 },
}
