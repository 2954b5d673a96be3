//! Wound drive coils and superconducting flux-concentrator cores.
//!
//! A concentrator is a slit cylindrical core driven by an outer wound
//! coil. In the superconducting state the core carries a shielding
//! current equal to the full ampere-turns of the drive, forced by the
//! slit to circulate around the narrow inner bore. The discrete model
//! used here represents that current as sheet filaments:
//!
//! * an inner near-full circle of radius `core_r2` spread over the
//!   `core_l2`-thick bore section that sits flush with the core's front
//!   face (the `+axis` side),
//! * a counter-circulating near-full circle of radius `core_r1` spread
//!   over the full core length `core_l1`,
//! * two straight slit legs, one per slit face, closing the circuit.
//!
//! The net current through any core cross-section is zero except around
//! the inner bore, which carries the full ampere-turns.

use crate::elements::{CurrentArc, CurrentElement, CurrentSegment};
use crate::vec3::Vec3;
use crate::{Assembly, GeometryError, Source};

use std::f64::consts::PI;

/// Default number of stacked filaments per current sheet. Doubling this
/// changes trap-region fields by well under 0.5% (covered by a test).
pub const DEFAULT_SHEET_FILAMENTS: usize = 16;

/// Cylindrical wound coil expanded into a deterministic turn lattice.
#[derive(Clone, Copy, Debug)]
pub struct WoundCoil {
    pub center: Vec3,
    /// Unit vector along the coil bore.
    pub axis: Vec3,
    /// m, innermost turn radius.
    pub inner_radius: f64,
    /// m, outermost turn radius (>= inner).
    pub outer_radius: f64,
    /// m, axial winding length.
    pub length: f64,
    pub turns: usize,
    /// A, per turn, signed by the right-hand rule about `axis`.
    pub current: f64,
}

impl WoundCoil {
    pub fn new(
        center: Vec3,
        axis: Vec3,
        inner_radius: f64,
        outer_radius: f64,
        length: f64,
        turns: usize,
        current: f64,
    ) -> Result<Self, GeometryError> {
        if inner_radius <= 0.0 || outer_radius < inner_radius {
            return Err(GeometryError::Invalid(
                "coil radii must satisfy outer >= inner > 0".into(),
            ));
        }
        if length <= 0.0 {
            return Err(GeometryError::Invalid("coil length must be > 0".into()));
        }
        if turns == 0 {
            return Err(GeometryError::Invalid("coil needs at least one turn".into()));
        }
        if !axis.is_unit(1e-12) {
            return Err(GeometryError::Invalid("coil axis must be unit".into()));
        }
        Ok(Self {
            center,
            axis,
            inner_radius,
            outer_radius,
            length,
            turns,
            current,
        })
    }

    pub fn with_current(mut self, current: f64) -> Self {
        self.current = current;
        self
    }

    /// Total ampere-turns, A.
    pub fn ampere_turns(&self) -> f64 {
        self.turns as f64 * self.current
    }

    /// Axial slots per winding layer for the implied square wire packing.
    fn turns_per_layer(&self) -> usize {
        let radial = self.outer_radius - self.inner_radius;
        if radial <= 0.0 {
            return self.turns;
        }
        // square wire cross-section d = sqrt(L W / N) gives L/d slots
        let slots = (self.turns as f64 * self.length / radial).sqrt().round() as usize;
        slots.clamp(1, self.turns)
    }

    /// The turn lattice: row-major over layers (inner to outer) and axial
    /// slots, each turn a full circular loop. Deterministic so repeated
    /// runs are bit-identical.
    pub fn turn_loops(&self) -> Vec<CurrentElement> {
        let per_layer = self.turns_per_layer();
        let layers = self.turns.div_ceil(per_layer);
        let radial_pitch = (self.outer_radius - self.inner_radius) / layers as f64;
        let axial_pitch = self.length / per_layer as f64;
        (0..self.turns)
            .map(|t| {
                let layer = t / per_layer;
                let slot = t % per_layer;
                let radius = if radial_pitch > 0.0 {
                    self.inner_radius + (layer as f64 + 0.5) * radial_pitch
                } else {
                    self.inner_radius
                };
                let z = -0.5 * self.length + (slot as f64 + 0.5) * axial_pitch;
                let arc = CurrentArc::full_loop(
                    self.center + self.axis * z,
                    self.axis,
                    radius,
                    self.current,
                )
                .expect("validated coil produces valid loops");
                CurrentElement::Arc(arc)
            })
            .collect()
    }
}

/// Normal or superconducting core.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreState {
    Normal,
    Superconducting,
}

/// A slit superconducting core with its drive coil.
#[derive(Clone, Copy, Debug)]
pub struct FluxConcentratorCoil {
    pub drive: WoundCoil,
    /// m, full core length (> core_l2).
    pub core_l1: f64,
    /// m, thickness of the bore section around the inner hole.
    pub core_l2: f64,
    /// m, core outer radius (> core_r2).
    pub core_r1: f64,
    /// m, inner bore radius.
    pub core_r2: f64,
    /// Unit vector from the core axis toward the slit, in the core plane.
    pub slit_direction: Vec3,
    /// m, gap between the two slit faces.
    pub slit_width: f64,
    pub state: CoreState,
    /// Filaments per sheet in the discrete shielding model.
    pub n_sheet: usize,
}

impl FluxConcentratorCoil {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        drive: WoundCoil,
        core_l1: f64,
        core_l2: f64,
        core_r1: f64,
        core_r2: f64,
        slit_direction: Vec3,
        slit_width: f64,
        state: CoreState,
    ) -> Result<Self, GeometryError> {
        if !(core_l1 > core_l2 && core_l2 > 0.0) {
            return Err(GeometryError::Invalid(
                "core lengths must satisfy l1 > l2 > 0".into(),
            ));
        }
        if !(core_r1 > core_r2 && core_r2 > 0.0) {
            return Err(GeometryError::Invalid(
                "core radii must satisfy r1 > r2 > 0".into(),
            ));
        }
        if slit_width <= 0.0 || slit_width >= 2.0 * core_r2 {
            return Err(GeometryError::Invalid(
                "slit width must be positive and narrower than the bore diameter".into(),
            ));
        }
        if !slit_direction.is_unit(1e-9) || slit_direction.dot(drive.axis).abs() > 1e-9 {
            return Err(GeometryError::Invalid(
                "slit direction must be a unit vector perpendicular to the coil axis".into(),
            ));
        }
        Ok(Self {
            drive,
            core_l1,
            core_l2,
            core_r1,
            core_r2,
            slit_direction,
            slit_width,
            state,
            n_sheet: DEFAULT_SHEET_FILAMENTS,
        })
    }

    pub fn with_state(mut self, state: CoreState) -> Self {
        self.state = state;
        self
    }

    pub fn with_n_sheet(mut self, n_sheet: usize) -> Self {
        assert!(n_sheet >= 1);
        self.n_sheet = n_sheet;
        self
    }

    pub fn with_drive_current(mut self, current: f64) -> Self {
        self.drive.current = current;
        self
    }

    /// Centre of the inner bore sheet, where the concentrated field peaks.
    pub fn bore_center(&self) -> Vec3 {
        self.drive.center + self.drive.axis * (0.5 * self.core_l1 - 0.5 * self.core_l2)
    }

    /// The plane of the inner current loop (axial coordinate of the bore
    /// sheet centre along the axis, from the drive centre).
    pub fn bore_plane_offset(&self) -> f64 {
        0.5 * self.core_l1 - 0.5 * self.core_l2
    }

    /// Front face of the core (the `+axis` side the bore section is flush with).
    pub fn front_face(&self) -> Vec3 {
        self.drive.center + self.drive.axis * (0.5 * self.core_l1)
    }

    /// The induced shielding current path in the superconducting state.
    ///
    /// Returns `n_sheet` series loops, each carrying ampere-turns /
    /// n_sheet: inner bore arc, slit leg out, counter-circulating outer
    /// arc, slit leg back.
    pub fn shielding_path(&self) -> Vec<CurrentElement> {
        assert_eq!(
            self.state,
            CoreState::Superconducting,
            "shielding path exists only in the superconducting state"
        );
        self.shielding_elements()
    }

    fn shielding_elements(&self) -> Vec<CurrentElement> {
        let n = self.n_sheet;
        let axis = self.drive.axis;
        let filament_current = self.drive.ampere_turns() / n as f64;

        // local frame: x toward the slit, y completes right-handed
        let xs = self.slit_direction;
        let ys = axis.cross(xs);
        let (u, _v) = CurrentArc::plane_frame(axis);
        // azimuth of the slit in the canonical arc frame
        let psi = f64::atan2(self.slit_direction.dot(axis.cross(u)), self.slit_direction.dot(u));

        let half_w = 0.5 * self.slit_width;
        let gap_inner = (half_w / self.core_r2).asin();
        let gap_outer = (half_w / self.core_r1).asin();
        let x_inner = (self.core_r2 * self.core_r2 - half_w * half_w).sqrt();
        let x_outer = (self.core_r1 * self.core_r1 - half_w * half_w).sqrt();

        let face = 0.5 * self.core_l1;
        let mut elements = Vec::with_capacity(4 * n);
        for k in 0..n {
            // inner sheet fills the bore section flush with the front face
            let z_in = face - self.core_l2 + (k as f64 + 0.5) * self.core_l2 / n as f64;
            // outer sheet spans the whole core
            let z_out = -face + (k as f64 + 0.5) * self.core_l1 / n as f64;
            let c_in = self.drive.center + axis * z_in;
            let c_out = self.drive.center + axis * z_out;

            // bore arc: same circulation as the drive
            elements.push(CurrentElement::Arc(
                CurrentArc::new(
                    c_in,
                    axis,
                    self.core_r2,
                    psi + gap_inner,
                    psi + 2.0 * PI - gap_inner,
                    filament_current,
                )
                .expect("validated core produces valid bore arc"),
            ));
            // outer return arc: counter-circulating
            elements.push(CurrentElement::Arc(
                CurrentArc::new(
                    c_out,
                    axis,
                    self.core_r1,
                    psi + gap_outer,
                    psi + 2.0 * PI - gap_outer,
                    -filament_current,
                )
                .expect("validated core produces valid outer arc"),
            ));
            // slit legs: outward on the -y face, back inward on the +y face
            let in_minus = c_in + xs * x_inner - ys * half_w;
            let in_plus = c_in + xs * x_inner + ys * half_w;
            let out_minus = c_out + xs * x_outer - ys * half_w;
            let out_plus = c_out + xs * x_outer + ys * half_w;
            elements.push(CurrentElement::Segment(
                CurrentSegment::new(in_minus, out_minus, filament_current)
                    .expect("slit legs have finite length"),
            ));
            elements.push(CurrentElement::Segment(
                CurrentSegment::new(out_plus, in_plus, filament_current)
                    .expect("slit legs have finite length"),
            ));
        }
        elements
    }

    /// Filament expansion: drive turns plus, when superconducting, the
    /// induced shielding path.
    pub fn expand(&self) -> Vec<CurrentElement> {
        let mut elements = self.drive.turn_loops();
        if self.state == CoreState::Superconducting {
            elements.extend(self.shielding_elements());
        }
        elements
    }

    /// Field amplification of the core, evaluated at the bore centre.
    pub fn amplification_factor(&self) -> AmplificationReport {
        let p = self.bore_center();
        let sc = Assembly::from_sources(vec![Source::Concentrator(
            self.with_state(CoreState::Superconducting),
        )]);
        let normal =
            Assembly::from_sources(vec![Source::Concentrator(self.with_state(CoreState::Normal))]);
        let b_sc = sc.field_at(p).expect("bore centre is off all filaments").norm();
        let b_normal = normal
            .field_at(p)
            .expect("bore centre is off all filaments")
            .norm();
        AmplificationReport {
            numeric_ratio: b_sc / b_normal,
            solenoid_length_ratio: self.core_l1 / self.core_l2,
        }
    }
}

/// Field amplification of a concentrator, two ways.
#[derive(Clone, Copy, Debug)]
pub struct AmplificationReport {
    /// |B| at the bore centre, superconducting over normal state.
    pub numeric_ratio: f64,
    /// Idealised long-solenoid estimate: ampere-turns per unit length of
    /// the bore sheet over that of the drive, i.e. l1 / l2.
    pub solenoid_length_ratio: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Drive coil and core dimensions used throughout the experiment-scale
    /// tests: 180 turns over a 4.5 mm x 0.4 mm winding window around a
    /// 6.57 mm radius core with a 0.2 mm bore.
    pub(crate) fn experiment_concentrator(state: CoreState) -> FluxConcentratorCoil {
        let drive = WoundCoil::new(
            Vec3::ZERO,
            Vec3::Z,
            6.62e-3,
            7.02e-3,
            4.5e-3,
            180,
            1.0,
        )
        .unwrap();
        FluxConcentratorCoil::new(
            drive,
            4.5e-3,
            0.45e-3,
            6.57e-3,
            0.2e-3,
            Vec3::X,
            0.2e-3,
            state,
        )
        .unwrap()
    }

    #[test]
    fn coil_lattice_fills_the_winding_window() {
        let coil = experiment_concentrator(CoreState::Normal).drive;
        let loops = coil.turn_loops();
        assert_eq!(loops.len(), 180);
        // 45 axial slots x 4 layers with 0.1 mm square wire
        let mut radii: Vec<f64> = loops
            .iter()
            .map(|e| match e {
                CurrentElement::Arc(a) => a.radius,
                _ => unreachable!(),
            })
            .collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(radii.len(), 4);
        assert_relative_eq!(radii[0], 6.67e-3, max_relative = 1e-12);
        assert_relative_eq!(radii[3], 6.97e-3, max_relative = 1e-12);
    }

    #[test]
    fn shielding_path_carries_full_ampere_turns() {
        let fc = experiment_concentrator(CoreState::Superconducting);
        let path = fc.shielding_path();
        assert_eq!(path.len(), 4 * fc.n_sheet);
        let inner_total: f64 = path
            .iter()
            .filter_map(|e| match e {
                CurrentElement::Arc(a) if (a.radius - fc.core_r2).abs() < 1e-12 => Some(a.current),
                _ => None,
            })
            .sum();
        assert_relative_eq!(inner_total, 180.0, max_relative = 1e-12);
        let outer_total: f64 = path
            .iter()
            .filter_map(|e| match e {
                CurrentElement::Arc(a) if (a.radius - fc.core_r1).abs() < 1e-12 => Some(a.current),
                _ => None,
            })
            .sum();
        assert_relative_eq!(outer_total, -180.0, max_relative = 1e-12);
        // bore sheet confined to the l2 section at the front face
        for e in &path {
            if let CurrentElement::Arc(a) = e {
                if (a.radius - fc.core_r2).abs() < 1e-12 {
                    let z = (a.center - fc.drive.center).dot(fc.drive.axis);
                    assert!(z >= 0.5 * fc.core_l1 - fc.core_l2 - 1e-12);
                    assert!(z <= 0.5 * fc.core_l1 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn legs_cancel_in_the_narrow_slit_limit() {
        // as the slit closes, the two antiparallel legs coincide and their
        // combined field vanishes everywhere off the slit plane
        let legs_field = |width: f64, probe: Vec3| -> (Vec3, f64) {
            let mut fc = experiment_concentrator(CoreState::Superconducting);
            fc.slit_width = width;
            let mut b = Vec3::ZERO;
            let mut single_scale = 0.0;
            for e in fc.shielding_path() {
                if let CurrentElement::Segment(s) = e {
                    let bl = crate::field::field_of_segment(&s, probe).unwrap();
                    b += bl;
                    single_scale += bl.norm();
                }
            }
            (b, single_scale)
        };
        // probe on the plane bisecting the slit (the axis/slit plane)
        let probe = Vec3::new(1e-3, 0.0, 4e-3);
        let (b_narrow, scale) = legs_field(2e-7, probe);
        assert!(
            b_narrow.norm() < 1e-3 * scale,
            "legs should nearly cancel: {:?} vs single-leg scale {scale:.3e}",
            b_narrow
        );
        // the residual is first order in the slit width
        let (b_tenth, _) = legs_field(2e-8, probe);
        let ratio = b_narrow.norm() / b_tenth.norm();
        assert!((ratio - 10.0).abs() < 0.5, "expected O(width) residual, ratio {ratio}");
    }

    #[test]
    fn solenoid_length_ratio_is_exactly_ten_for_experiment_dims() {
        let fc = experiment_concentrator(CoreState::Superconducting);
        let report = fc.amplification_factor();
        assert_relative_eq!(report.solenoid_length_ratio, 10.0, max_relative = 1e-15);
    }

    #[test]
    fn equal_section_lengths_give_unit_length_ratio() {
        let mut fc = experiment_concentrator(CoreState::Superconducting);
        fc.core_l2 = fc.core_l1 * (1.0 - 1e-12);
        assert_relative_eq!(
            fc.amplification_factor().solenoid_length_ratio,
            1.0,
            max_relative = 1e-9
        );
    }
}
