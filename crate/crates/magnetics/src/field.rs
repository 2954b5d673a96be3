//! Biot-Savart field evaluation for elements and assemblies.
//!
//! Straight segments use the finite-wire closed form; full circular
//! loops use the off-axis elliptic-integral solution (Jackson section
//! 5.5; see also the NASA report by Simpson et al. on loop field
//! formulas); partial arcs fall back to adaptive quadrature of the
//! filament integrand. Arcs spanning more than a half turn are evaluated
//! as a full loop minus the complementary arc so the expensive
//! quadrature runs over the short gap.

use crate::concentrator::{FluxConcentratorCoil, WoundCoil};
use crate::elements::{CurrentArc, CurrentElement, CurrentSegment};
use crate::ellip::ellipke;
use crate::quadrature::integrate_vec3;
use crate::vec3::Vec3;
use crate::{FieldError, MIN_FILAMENT_DISTANCE, MU_0};

use std::f64::consts::PI;

/// Relative tolerance for partial-arc quadrature.
const ARC_QUAD_REL_TOL: f64 = 1e-10;

/// Field of a straight finite segment at `p`, tesla.
///
/// Singular on the filament itself; on the continuation of the segment
/// axis the field is exactly zero and is returned as such.
pub fn field_of_segment(seg: &CurrentSegment, p: Vec3) -> Result<Vec3, FieldError> {
    if seg.distance_to(p) < MIN_FILAMENT_DISTANCE {
        return Err(FieldError::SingularPoint(p));
    }
    let a = seg.end - seg.start;
    let r1 = p - seg.start;
    let r2 = p - seg.end;
    let c = a.cross(r1);
    let c_norm = c.norm();
    let a_norm = a.norm();
    // perpendicular distance to the carrying line
    let rho = c_norm / a_norm;
    if rho < MIN_FILAMENT_DISTANCE {
        // on the extended axis but off the segment: dl x r vanishes
        return Ok(Vec3::ZERO);
    }
    let cos1 = a.dot(r1) / (a_norm * r1.norm());
    let cos2 = a.dot(r2) / (a_norm * r2.norm());
    let magnitude = MU_0 * seg.current / (4.0 * PI * rho) * (cos1 - cos2);
    Ok(c * (magnitude / c_norm))
}

/// Field of a circular arc at `p`, tesla.
///
/// Full loops use the complete-elliptic-integral closed form; partial
/// arcs adaptive quadrature to 1e-10 relative.
pub fn field_of_arc(arc: &CurrentArc, p: Vec3) -> Result<Vec3, FieldError> {
    if arc.circle_distance_to(p) < MIN_FILAMENT_DISTANCE {
        return Err(FieldError::SingularPoint(p));
    }
    if arc.is_full_loop() {
        return Ok(loop_field_elliptic(arc, p));
    }
    let span = arc.span();
    if span > PI {
        // full loop minus the (shorter) complementary arc
        let full = loop_field_elliptic(arc, p);
        let gap = CurrentArc {
            start_angle: arc.end_angle,
            end_angle: arc.start_angle + 2.0 * PI,
            ..*arc
        };
        Ok(full - arc_field_quadrature(&gap, p))
    } else {
        Ok(arc_field_quadrature(arc, p))
    }
}

/// Closed-form field of a full circular loop via K(m), E(m).
fn loop_field_elliptic(arc: &CurrentArc, p: Vec3) -> Vec3 {
    let rel = p - arc.center;
    let z = rel.dot(arc.axis);
    let in_plane = rel - arc.axis * z;
    let rho = in_plane.norm();
    let a = arc.radius;

    // on axis: the transverse components vanish exactly
    if rho < 1e-12 * a {
        let bz = MU_0 * arc.current * a * a / (2.0 * (a * a + z * z).powf(1.5));
        return arc.axis * bz;
    }

    let rho_hat = in_plane * (1.0 / rho);
    let q = (a + rho) * (a + rho) + z * z;
    let m = 4.0 * a * rho / q;
    let (k, e) = ellipke(m);
    let denom = (a - rho) * (a - rho) + z * z;
    let prefactor = MU_0 * arc.current / (2.0 * PI * q.sqrt());
    let b_rho = prefactor * (z / rho) * ((a * a + rho * rho + z * z) / denom * e - k);
    let b_z = prefactor * ((a * a - rho * rho - z * z) / denom * e + k);
    rho_hat * b_rho + arc.axis * b_z
}

/// Quadrature of dB = mu0 I dl x r / (4 pi r^3) over the arc angle.
fn arc_field_quadrature(arc: &CurrentArc, p: Vec3) -> Vec3 {
    let scale = MU_0 * arc.current * arc.radius / (4.0 * PI);
    let integrand = |theta: f64| -> Vec3 {
        let r = p - arc.point_at(theta);
        let r3 = r.norm_sq() * r.norm();
        arc.tangent_at(theta).cross(r) * (1.0 / r3)
    };
    integrate_vec3(&integrand, arc.start_angle, arc.end_angle, ARC_QUAD_REL_TOL) * scale
}

/// One source of an assembly.
#[derive(Clone, Debug)]
pub enum Source {
    Element(CurrentElement),
    Coil(WoundCoil),
    Concentrator(FluxConcentratorCoil),
}

/// A set of current sources with the filament expansion cached.
///
/// Evaluation is a pure function of the geometry, so assemblies can be
/// shared across threads and evaluated at many points concurrently.
#[derive(Clone, Debug, Default)]
pub struct Assembly {
    sources: Vec<Source>,
    elements: Vec<CurrentElement>,
}

impl Assembly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sources(sources: Vec<Source>) -> Self {
        let mut assembly = Self {
            sources: Vec::new(),
            elements: Vec::new(),
        };
        for s in sources {
            assembly.push(s);
        }
        assembly
    }

    pub fn push(&mut self, source: Source) {
        match &source {
            Source::Element(e) => self.elements.push(*e),
            Source::Coil(c) => self.elements.extend(c.turn_loops()),
            Source::Concentrator(fc) => self.elements.extend(fc.expand()),
        }
        self.sources.push(source);
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn elements(&self) -> &[CurrentElement] {
        &self.elements
    }

    /// Same geometry with every current multiplied by `factor`.
    pub fn with_scaled_currents(&self, factor: f64) -> Assembly {
        let sources = self
            .sources
            .iter()
            .map(|s| match s {
                Source::Element(e) => Source::Element(e.scaled(factor)),
                Source::Coil(c) => Source::Coil(c.with_current(c.current * factor)),
                Source::Concentrator(fc) => {
                    Source::Concentrator(fc.with_drive_current(fc.drive.current * factor))
                }
            })
            .collect();
        Assembly::from_sources(sources)
    }

    /// Superposed field of every element at `p`, tesla.
    pub fn field_at(&self, p: Vec3) -> Result<Vec3, FieldError> {
        let mut b = Vec3::ZERO;
        for element in &self.elements {
            b += match element {
                CurrentElement::Arc(a) => field_of_arc(a, p)?,
                CurrentElement::Segment(s) => field_of_segment(s, p)?,
            };
        }
        Ok(b)
    }

    /// Smallest distance from `p` to any filament of the assembly.
    pub fn filament_distance(&self, p: Vec3) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                CurrentElement::Arc(a) => a.circle_distance_to(p),
                CurrentElement::Segment(s) => s.distance_to(p),
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn infinite_wire_limit() {
        // 20 m long wire, evaluated 1 cm away at its middle: B = mu0 I / (2 pi d)
        let seg = CurrentSegment::new(
            Vec3::new(0.0, 0.0, -10.0),
            Vec3::new(0.0, 0.0, 10.0),
            1.0,
        )
        .unwrap();
        let b = field_of_segment(&seg, Vec3::new(0.01, 0.0, 0.0)).unwrap();
        let expect = MU_0 * 1.0 / (2.0 * PI * 0.01);
        // truncating the wire at +-10 m costs (d/L)^2/2 = 5e-7 relative
        assert_relative_eq!(b.norm(), expect, max_relative = 1e-6);
        assert_relative_eq!(b.norm(), 2.0e-5, max_relative = 1e-6);
        // direction: z-current, +x observer -> +y field
        assert!(b.y > 0.0 && b.x.abs() < 1e-20 && b.z.abs() < 1e-20);
    }

    #[test]
    fn segment_bisector_closed_form() {
        // |B| = mu0 I L / (2 pi d sqrt(d^2 + L^2)) at distance d on the
        // perpendicular bisector of a segment of half-length L
        let half_len = 0.3;
        let d = 0.05;
        let current = 2.5;
        let seg = CurrentSegment::new(
            Vec3::new(0.0, 0.0, -half_len),
            Vec3::new(0.0, 0.0, half_len),
            current,
        )
        .unwrap();
        let b = field_of_segment(&seg, Vec3::new(d, 0.0, 0.0)).unwrap();
        let expect = MU_0 * current * half_len / (2.0 * PI * d * (d * d + half_len * half_len).sqrt());
        assert_relative_eq!(b.norm(), expect, max_relative = 1e-13);
    }

    #[test]
    fn segment_on_wire_is_singular_on_axis_zero() {
        let seg = CurrentSegment::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0), 1.0).unwrap();
        assert!(field_of_segment(&seg, Vec3::new(0.0, 0.0, 0.5)).is_err());
        // beyond the end, on the carrying line: exactly zero
        let b = field_of_segment(&seg, Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(b, Vec3::ZERO);
    }

    #[test]
    fn loop_center_field() {
        // mu0 I / 2r at the center of a 0.2 mm radius loop
        let arc = CurrentArc::full_loop(Vec3::ZERO, Vec3::Z, 0.2e-3, 1.0).unwrap();
        let b = field_of_arc(&arc, Vec3::ZERO).unwrap();
        assert_relative_eq!(b.z, MU_0 / (2.0 * 0.2e-3), max_relative = 1e-12);
        assert_relative_eq!(b.z, 3.1416e-3, max_relative = 1e-4);
    }

    #[test]
    fn loop_on_axis_closed_form() {
        let r = 0.01;
        let arc = CurrentArc::full_loop(Vec3::ZERO, Vec3::Z, r, 3.0).unwrap();
        for z in [0.001, 0.01, 0.1] {
            let b = field_of_arc(&arc, Vec3::new(0.0, 0.0, z)).unwrap();
            let expect = MU_0 * 3.0 * r * r / (2.0 * (r * r + z * z).powf(1.5));
            assert_relative_eq!(b.z, expect, max_relative = 1e-12);
            assert!(b.x.abs() < 1e-18 && b.y.abs() < 1e-18);
        }
    }

    #[test]
    fn tilted_loop_matches_rotated_frame() {
        // field of a tilted loop at its center is mu0 I / 2r along its axis
        let axis = Vec3::new(0.6, 0.0, 0.8);
        let arc = CurrentArc::full_loop(Vec3::new(0.1, -0.2, 0.3), axis, 0.05, -2.0).unwrap();
        let b = field_of_arc(&arc, Vec3::new(0.1, -0.2, 0.3)).unwrap();
        let expect = axis * (MU_0 * -2.0 / (2.0 * 0.05));
        assert_relative_eq!(b.x, expect.x, max_relative = 1e-12);
        assert_relative_eq!(b.y, expect.y, max_relative = 1e-12);
        assert_relative_eq!(b.z, expect.z, max_relative = 1e-12);
    }

    #[test]
    fn partial_arcs_sum_to_full_loop() {
        let center = Vec3::new(0.0, 0.0, 0.01);
        let full = CurrentArc::full_loop(center, Vec3::Z, 0.03, 1.5).unwrap();
        let p = Vec3::new(0.012, -0.004, 0.03);
        let b_full = field_of_arc(&full, p).unwrap();
        let mut b_sum = Vec3::ZERO;
        // three uneven pieces, one of them > pi so the subtraction path runs too
        let cuts = [0.0, 1.1, 2.0, 2.0 * PI];
        for w in cuts.windows(2) {
            let piece = CurrentArc::new(center, Vec3::Z, 0.03, w[0], w[1], 1.5).unwrap();
            b_sum += field_of_arc(&piece, p).unwrap();
        }
        assert_relative_eq!(b_full.x, b_sum.x, max_relative = 1e-9);
        assert_relative_eq!(b_full.y, b_sum.y, max_relative = 1e-9);
        assert_relative_eq!(b_full.z, b_sum.z, max_relative = 1e-9);
    }

    #[test]
    fn empty_assembly_is_field_free() {
        let assembly = Assembly::new();
        assert_eq!(assembly.field_at(Vec3::new(1.0, 2.0, 3.0)).unwrap(), Vec3::ZERO);
    }

    #[test]
    fn assembly_superposition_is_linear() {
        let mut assembly = Assembly::new();
        assembly.push(Source::Element(CurrentElement::Arc(
            CurrentArc::full_loop(Vec3::ZERO, Vec3::Z, 0.02, 1.3).unwrap(),
        )));
        assembly.push(Source::Element(CurrentElement::Segment(
            CurrentSegment::new(Vec3::new(0.1, 0.0, -1.0), Vec3::new(0.1, 0.0, 1.0), -0.7).unwrap(),
        )));
        let p = Vec3::new(0.004, 0.006, 0.011);
        let b1 = assembly.field_at(p).unwrap();
        let b2 = assembly.with_scaled_currents(2.0).field_at(p).unwrap();
        assert_relative_eq!(b2.x, 2.0 * b1.x, max_relative = 1e-12);
        assert_relative_eq!(b2.y, 2.0 * b1.y, max_relative = 1e-12);
        assert_relative_eq!(b2.z, 2.0 * b1.z, max_relative = 1e-12);
    }
}
