//! Levitation potential of a Meissner-state sphere.
//!
//! A superconducting sphere in the Meissner state behaves as a perfect
//! diamagnet with effective susceptibility -3/2, giving the interaction
//! energy U = (3 V_p / 4 mu0) |B|^2. Gravity adds m g z.

use crate::config::TrapConfig;
use crate::TrapError;
use fluxtrap_magnetics::{Assembly, Vec3, MU_0};

/// Potential energy of the particle at `p`, J.
pub fn potential_energy(cfg: &TrapConfig, p: Vec3) -> Result<f64, TrapError> {
    let assembly = cfg.assembly();
    potential_energy_with(cfg, &assembly, p)
}

/// Same as [`potential_energy`] but reusing a prebuilt assembly, which
/// matters inside minimisation loops.
pub fn potential_energy_with(
    cfg: &TrapConfig,
    assembly: &Assembly,
    p: Vec3,
) -> Result<f64, TrapError> {
    let b = assembly.field_at(p)?;
    let magnetic = 3.0 * cfg.particle.volume() / (4.0 * MU_0) * b.norm_sq();
    let gravitational = cfg.particle.mass() * cfg.gravity * p.z;
    Ok(magnetic + gravitational)
}
