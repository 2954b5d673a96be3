//! The levitated superconducting particle.

use std::f64::consts::PI;

/// Spherical particle in the Meissner state.
///
/// Default is a 50 um diameter Sn63Pb37 solder sphere (handbook density
/// 8400 kg/m^3), superconducting below about 7 K.
#[derive(Clone, Copy, Debug)]
pub struct Particle {
    /// m.
    pub radius: f64,
    /// kg/m^3.
    pub density: f64,
}

impl Particle {
    pub fn new(radius: f64, density: f64) -> Self {
        assert!(radius > 0.0 && density > 0.0, "particle needs positive radius and density");
        Self { radius, density }
    }

    /// m^3.
    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * PI * self.radius.powi(3)
    }

    /// kg; mass is density times volume by construction.
    pub fn mass(&self) -> f64 {
        self.density * self.volume()
    }
}

impl Default for Particle {
    fn default() -> Self {
        Self::new(25e-6, 8400.0)
    }
}
