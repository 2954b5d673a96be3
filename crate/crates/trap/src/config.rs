//! Trap assembly: two flux concentrators across a gap.

use crate::particle::Particle;
use crate::TrapError;
use fluxtrap_magnetics::{
    Assembly, CoreState, FluxConcentratorCoil, GeometryError, Source, Vec3, WoundCoil,
};

/// Shared geometry of one concentrator coil, before placement.
///
/// Defaults are the machined-core experiment values: 4.5 mm core with a
/// 0.45 mm thick bore section, 6.57 mm outer and 0.2 mm bore radius,
/// driven by 180 turns of 0.1 mm wire wound in four layers directly over
/// the core.
#[derive(Clone, Copy, Debug)]
pub struct ConcentratorDims {
    pub core_l1: f64,
    pub core_l2: f64,
    pub core_r1: f64,
    pub core_r2: f64,
    pub slit_width: f64,
    pub coil_inner_radius: f64,
    pub coil_outer_radius: f64,
    pub coil_length: f64,
    pub turns: usize,
    pub n_sheet: usize,
}

impl Default for ConcentratorDims {
    fn default() -> Self {
        Self {
            core_l1: 4.5e-3,
            core_l2: 0.45e-3,
            core_r1: 6.57e-3,
            core_r2: 0.2e-3,
            slit_width: 0.2e-3,
            coil_inner_radius: 6.62e-3,
            coil_outer_radius: 7.02e-3,
            coil_length: 4.5e-3,
            turns: 180,
            n_sheet: fluxtrap_magnetics::concentrator::DEFAULT_SHEET_FILAMENTS,
        }
    }
}

impl ConcentratorDims {
    /// Build one concentrator at `center` with the given axis and slit.
    pub fn place(
        &self,
        center: Vec3,
        axis: Vec3,
        slit_direction: Vec3,
        current: f64,
        state: CoreState,
    ) -> Result<FluxConcentratorCoil, GeometryError> {
        let drive = WoundCoil::new(
            center,
            axis,
            self.coil_inner_radius,
            self.coil_outer_radius,
            self.coil_length,
            self.turns,
            current,
        )?;
        Ok(FluxConcentratorCoil::new(
            drive,
            self.core_l1,
            self.core_l2,
            self.core_r1,
            self.core_r2,
            slit_direction,
            self.slit_width,
            state,
        )?
        .with_n_sheet(self.n_sheet))
    }
}

/// A fully placed anti-Helmholtz concentrator pair plus the particle.
///
/// The gap is centred on the origin with the z axis along the coil
/// bores. The bottom coil's axis points up (+z) and the top coil's axis
/// points down, so their front faces (the bore sections) face each other
/// across `separation`; equal positive currents then circulate
/// oppositely in the lab frame. Slits are anti-aligned: the bottom slit
/// along +x, the top slit along -x.
#[derive(Clone, Debug)]
pub struct TrapConfig {
    pub top: FluxConcentratorCoil,
    pub bottom: FluxConcentratorCoil,
    /// m, gap between the core front faces.
    pub separation: f64,
    pub particle: Particle,
    /// m/s^2 along -z; set to zero for linearity and scaling tests.
    pub gravity: f64,
}

impl TrapConfig {
    /// Symmetric experiment-style trap: same dims for both coils,
    /// anti-aligned slits, opposite circulation.
    pub fn anti_helmholtz(
        dims: &ConcentratorDims,
        separation: f64,
        i_top: f64,
        i_bottom: f64,
        particle: Particle,
        gravity: f64,
    ) -> Result<Self, TrapError> {
        if separation <= 0.0 {
            return Err(
                GeometryError::Invalid("coil separation must be positive".into()).into(),
            );
        }
        let half = 0.5 * separation + 0.5 * dims.core_l1;
        let bottom = dims.place(
            Vec3::new(0.0, 0.0, -half),
            Vec3::Z,
            Vec3::X,
            i_bottom,
            CoreState::Superconducting,
        )?;
        let top = dims.place(
            Vec3::new(0.0, 0.0, half),
            -Vec3::Z,
            -Vec3::X,
            i_top,
            CoreState::Superconducting,
        )?;
        let cfg = Self {
            top,
            bottom,
            separation,
            particle,
            gravity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Invariants: positive gap, collinear axes, anti-aligned slits.
    pub fn validate(&self) -> Result<(), TrapError> {
        if self.separation <= 0.0 {
            return Err(
                GeometryError::Invalid("coil separation must be positive".into()).into(),
            );
        }
        let cross = self.top.drive.axis.cross(self.bottom.drive.axis).norm();
        if cross > 1e-9 {
            return Err(GeometryError::Invalid(
                "coil axes must be collinear to 1e-9".into(),
            )
            .into());
        }
        if (self.top.slit_direction + self.bottom.slit_direction).norm() > 1e-9 {
            return Err(GeometryError::Invalid(
                "slit directions must be anti-aligned".into(),
            )
            .into());
        }
        Ok(())
    }

    /// Geometric centre of the inter-coil gap.
    pub fn gap_center(&self) -> Vec3 {
        (self.top.front_face() + self.bottom.front_face()) * 0.5
    }

    /// True when `p` lies in the search region between the coils:
    /// axially inside the gap with a small margin off the faces,
    /// radially within one gap width of the axis.
    pub fn in_gap_region(&self, p: Vec3) -> bool {
        let center = self.gap_center();
        let rel = p - center;
        let axis = self.bottom.drive.axis;
        let z = rel.dot(axis);
        let rho = (rel - axis * z).norm();
        z.abs() <= 0.48 * self.separation && rho <= self.separation
    }

    pub fn assembly(&self) -> Assembly {
        Assembly::from_sources(vec![
            Source::Concentrator(self.bottom),
            Source::Concentrator(self.top),
        ])
    }

    /// Mean drive current magnitude of the two coils, A.
    pub fn mean_current(&self) -> f64 {
        0.5 * (self.top.drive.current.abs() + self.bottom.drive.current.abs())
    }

    /// Mean ampere-turns of the two drives, A.
    pub fn mean_ampere_turns(&self) -> f64 {
        0.5 * (self.top.drive.ampere_turns().abs() + self.bottom.drive.ampere_turns().abs())
    }

    pub fn with_currents(&self, i_top: f64, i_bottom: f64) -> Self {
        let mut cfg = self.clone();
        cfg.top = cfg.top.with_drive_current(i_top);
        cfg.bottom = cfg.bottom.with_drive_current(i_bottom);
        cfg
    }

    pub fn with_gravity(&self, gravity: f64) -> Self {
        let mut cfg = self.clone();
        cfg.gravity = gravity;
        cfg
    }

    /// Same coils and currents at a different face-to-face gap.
    pub fn with_separation(&self, separation: f64) -> Result<Self, TrapError> {
        let axis = self.bottom.drive.axis;
        let center = self.gap_center();
        let mut cfg = self.clone();
        let half = 0.5 * separation + 0.5 * self.bottom.core_l1;
        cfg.bottom.drive.center = center - axis * half;
        let half_top = 0.5 * separation + 0.5 * self.top.core_l1;
        cfg.top.drive.center = center + axis * half_top;
        cfg.separation = separation;
        cfg.validate()?;
        Ok(cfg)
    }
}
