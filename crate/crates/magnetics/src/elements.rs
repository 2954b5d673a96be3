//! Filamentary current elements: straight segments and circular arcs.

use crate::vec3::Vec3;
use crate::GeometryError;

/// Straight filament from `start` to `end`; positive current flows
/// start -> end.
#[derive(Clone, Copy, Debug)]
pub struct CurrentSegment {
    pub start: Vec3,
    pub end: Vec3,
    /// A, signed.
    pub current: f64,
}

impl CurrentSegment {
    pub fn new(start: Vec3, end: Vec3, current: f64) -> Result<Self, GeometryError> {
        if !(start.is_finite() && end.is_finite() && current.is_finite()) {
            return Err(GeometryError::Invalid("segment has non-finite data".into()));
        }
        if (end - start).norm() == 0.0 {
            return Err(GeometryError::Invalid(
                "segment start and end coincide".into(),
            ));
        }
        Ok(Self {
            start,
            end,
            current,
        })
    }

    /// Distance from `p` to the filament (closest point on the segment).
    pub fn distance_to(&self, p: Vec3) -> f64 {
        let a = self.end - self.start;
        let t = ((p - self.start).dot(a) / a.norm_sq()).clamp(0.0, 1.0);
        (p - (self.start + a * t)).norm()
    }
}

/// Circular arc filament.
///
/// The arc lies in the plane through `center` normal to `axis`. Angles
/// are measured in the canonical in-plane frame of the axis (see
/// [`CurrentArc::plane_frame`]), increasing by the right-hand rule about
/// `axis`, and positive current flows in the direction of increasing
/// angle.
#[derive(Clone, Copy, Debug)]
pub struct CurrentArc {
    pub center: Vec3,
    /// Unit normal of the arc plane.
    pub axis: Vec3,
    /// m, > 0.
    pub radius: f64,
    /// rad; `end_angle > start_angle`, span capped at 2 pi.
    pub start_angle: f64,
    pub end_angle: f64,
    /// A, signed; sign is the orientation by the right-hand rule about `axis`.
    pub current: f64,
}

impl CurrentArc {
    pub fn new(
        center: Vec3,
        axis: Vec3,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
        current: f64,
    ) -> Result<Self, GeometryError> {
        if radius <= 0.0 {
            return Err(GeometryError::Invalid("arc radius must be > 0".into()));
        }
        if !axis.is_unit(1e-12) {
            return Err(GeometryError::Invalid(
                "arc axis must be unit length to 1e-12".into(),
            ));
        }
        if !(end_angle > start_angle) {
            return Err(GeometryError::Invalid(
                "arc end angle must exceed start angle".into(),
            ));
        }
        if end_angle - start_angle > 2.0 * std::f64::consts::PI + 1e-12 {
            return Err(GeometryError::Invalid("arc span exceeds a full turn".into()));
        }
        Ok(Self {
            center,
            axis,
            radius,
            start_angle,
            end_angle,
            current,
        })
    }

    /// Full circle of radius `radius` about `axis`.
    pub fn full_loop(
        center: Vec3,
        axis: Vec3,
        radius: f64,
        current: f64,
    ) -> Result<Self, GeometryError> {
        Self::new(center, axis, radius, 0.0, 2.0 * std::f64::consts::PI, current)
    }

    pub fn span(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn is_full_loop(&self) -> bool {
        self.span() >= 2.0 * std::f64::consts::PI - 1e-12
    }

    /// Canonical orthonormal in-plane frame `(u, v)` of an axis: `u` is
    /// the projection of the global x axis (or y, when the axis is nearly
    /// parallel to x) onto the arc plane, and `v = axis x u`. Angle zero
    /// points along `u`. Deterministic, so geometry built from angles is
    /// reproducible bit-for-bit.
    pub fn plane_frame(axis: Vec3) -> (Vec3, Vec3) {
        let seed = if axis.x.abs() <= 0.9 { Vec3::X } else { Vec3::Y };
        let u = (seed - axis * seed.dot(axis)).normalized();
        let v = axis.cross(u);
        (u, v)
    }

    /// Point on the arc at parameter angle `theta`.
    pub fn point_at(&self, theta: f64) -> Vec3 {
        let (u, v) = Self::plane_frame(self.axis);
        self.center + (u * theta.cos() + v * theta.sin()) * self.radius
    }

    /// Unit tangent at parameter angle `theta` (direction of positive current).
    pub fn tangent_at(&self, theta: f64) -> Vec3 {
        let (u, v) = Self::plane_frame(self.axis);
        u * (-theta.sin()) + v * theta.cos()
    }

    /// Distance from `p` to the full circle carrying the arc. A lower
    /// bound on the distance to the arc itself, which is what the
    /// singularity guard needs.
    pub fn circle_distance_to(&self, p: Vec3) -> f64 {
        let rel = p - self.center;
        let z = rel.dot(self.axis);
        let in_plane = rel - self.axis * z;
        let rho = in_plane.norm();
        ((rho - self.radius).powi(2) + z * z).sqrt()
    }
}

/// One filamentary element of an assembly.
#[derive(Clone, Copy, Debug)]
pub enum CurrentElement {
    Arc(CurrentArc),
    Segment(CurrentSegment),
}

impl CurrentElement {
    pub fn current(&self) -> f64 {
        match self {
            CurrentElement::Arc(a) => a.current,
            CurrentElement::Segment(s) => s.current,
        }
    }

    pub fn scaled(&self, factor: f64) -> CurrentElement {
        match *self {
            CurrentElement::Arc(mut a) => {
                a.current *= factor;
                CurrentElement::Arc(a)
            }
            CurrentElement::Segment(mut s) => {
                s.current *= factor;
                CurrentElement::Segment(s)
            }
        }
    }
}
