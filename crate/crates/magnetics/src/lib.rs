//! Static magnetic fields of filamentary current assemblies.
//!
//! Arcs and straight segments are the geometric atoms; wound coils expand
//! to turn lattices of circular loops, and superconducting
//! flux-concentrator cores are represented by the discrete shielding
//! current path they induce (inner bore sheet, counter-circulating outer
//! sheet, slit legs). All quantities are strict SI: metres, amperes,
//! tesla.

pub mod concentrator;
pub mod elements;
pub mod ellip;
pub mod field;
pub mod fieldmap;
pub mod jacobian;
pub mod quadrature;
pub mod vec3;

pub use concentrator::{AmplificationReport, CoreState, FluxConcentratorCoil, WoundCoil};
pub use elements::{CurrentArc, CurrentElement, CurrentSegment};
pub use field::{field_of_arc, field_of_segment, Assembly, Source};
pub use fieldmap::{format_exp9, FieldMap};
pub use jacobian::{field_jacobian, FieldJacobian};
pub use vec3::Vec3;

use thiserror::Error;

/// Vacuum permeability, T m / A.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Evaluation points closer than this to a filament are rejected as singular.
pub const MIN_FILAMENT_DISTANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("point {0:?} m lies on a current filament")]
    SingularPoint(Vec3),
    #[error("finite-difference step too large: Richardson disagreement {disagreement:.3e} rel")]
    StepTooLarge { disagreement: f64 },
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("{0}")]
    Invalid(String),
}
