//! Finite-difference field Jacobians.
//!
//! Central differences with one Richardson extrapolation step. Analytic
//! derivatives of the elliptic-integral loop field are easy to get
//! wrong; the extrapolated stencil is verifiable against div B = 0 and
//! curl B = 0 and carries its own error estimate.

use crate::field::Assembly;
use crate::vec3::Vec3;
use crate::FieldError;

/// Default finite-difference step, m.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Largest tolerated relative disagreement between the h and h/2 stencils.
const RICHARDSON_TOL: f64 = 1e-4;

/// The 3x3 matrix of spatial field derivatives at a point.
#[derive(Clone, Copy, Debug)]
pub struct FieldJacobian {
    /// `matrix[i][j] = dB_i / dx_j`, T/m.
    pub matrix: [[f64; 3]; 3],
    pub point: Vec3,
    /// Base finite-difference step used, m.
    pub step: f64,
}

impl FieldJacobian {
    /// Divergence of B; vanishes identically for physical fields.
    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1] + self.matrix[2][2]
    }

    pub fn max_entry(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
    }

    /// Largest element of the antisymmetric part (curl components / 2).
    pub fn max_antisymmetry(&self) -> f64 {
        let m = &self.matrix;
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (m[i][j] - m[j][i]).abs())
            .fold(0.0_f64, f64::max)
    }

    /// Rate of change of |B| along axis `j` at a field zero: the norm of
    /// the j-th Jacobian column. At the quadrupole null this is the
    /// directional gradient of the field magnitude.
    pub fn column_norm(&self, j: usize) -> f64 {
        (0..3)
            .map(|i| self.matrix[i][j] * self.matrix[i][j])
            .sum::<f64>()
            .sqrt()
    }

    pub fn column_norms(&self) -> [f64; 3] {
        [self.column_norm(0), self.column_norm(1), self.column_norm(2)]
    }
}

/// Central-difference Jacobian of the assembly field at `p`.
///
/// Evaluates the stencil at steps `h` and `h/2` and Richardson-combines
/// them; errors if the two stencils disagree by more than 1e-4 relative,
/// which flags a step too large for the local field curvature.
pub fn field_jacobian(assembly: &Assembly, p: Vec3, h: f64) -> Result<FieldJacobian, FieldError> {
    assert!(h > 0.0, "step must be positive");
    let coarse = stencil(assembly, p, h)?;
    let fine = stencil(assembly, p, 0.5 * h)?;

    let mut matrix = [[0.0; 3]; 3];
    let mut scale = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            matrix[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
            scale = scale.max(matrix[i][j].abs());
        }
    }
    let mut disagreement = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            disagreement = disagreement.max((fine[i][j] - coarse[i][j]).abs());
        }
    }
    let rel = disagreement / scale.max(f64::MIN_POSITIVE);
    if rel > RICHARDSON_TOL {
        return Err(FieldError::StepTooLarge { disagreement: rel });
    }
    Ok(FieldJacobian {
        matrix,
        point: p,
        step: h,
    })
}

fn stencil(assembly: &Assembly, p: Vec3, h: f64) -> Result<[[f64; 3]; 3], FieldError> {
    let mut m = [[0.0; 3]; 3];
    for j in 0..3 {
        let e = Vec3::axis(j);
        let plus = assembly.field_at(p + e * h)?;
        let minus = assembly.field_at(p - e * h)?;
        let d = (plus - minus) * (1.0 / (2.0 * h));
        m[0][j] = d.x;
        m[1][j] = d.y;
        m[2][j] = d.z;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{CurrentArc, CurrentElement};
    use crate::field::Source;
    use crate::MU_0;
    use approx::assert_relative_eq;

    fn anti_helmholtz_pair(radius: f64, half_gap: f64, current: f64) -> Assembly {
        Assembly::from_sources(vec![
            Source::Element(CurrentElement::Arc(
                CurrentArc::full_loop(Vec3::new(0.0, 0.0, -half_gap), Vec3::Z, radius, current)
                    .unwrap(),
            )),
            Source::Element(CurrentElement::Arc(
                CurrentArc::full_loop(Vec3::new(0.0, 0.0, half_gap), Vec3::Z, radius, -current)
                    .unwrap(),
            )),
        ])
    }

    #[test]
    fn ideal_anti_helmholtz_quadrupole_structure() {
        let (a, h, i) = (0.01, 0.006, 2.0);
        let assembly = anti_helmholtz_pair(a, h, i);
        let jac = field_jacobian(&assembly, Vec3::ZERO, 1e-6).unwrap();
        // closed form: dBz/dz at the centre of an opposed pair (+I below, -I above)
        let g2 = -3.0 * MU_0 * i * a * a * h / (a * a + h * h).powf(2.5);
        assert_relative_eq!(jac.matrix[2][2], g2, max_relative = 1e-8);
        assert_relative_eq!(jac.matrix[0][0], -0.5 * g2, max_relative = 1e-8);
        assert_relative_eq!(jac.matrix[1][1], -0.5 * g2, max_relative = 1e-8);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(jac.matrix[i][j].abs() < 1e-8 * g2.abs());
                }
            }
        }
    }

    #[test]
    fn divergence_free_to_stencil_noise() {
        let assembly = anti_helmholtz_pair(0.01, 0.006, 1.3);
        let jac = field_jacobian(&assembly, Vec3::new(0.002, -0.001, 0.0015), 1e-6).unwrap();
        assert!(jac.trace().abs() <= 1e-6 * jac.max_entry());
    }

    #[test]
    fn oversized_step_is_rejected() {
        // step comparable to the loop radius: curvature breaks the stencil
        let assembly = anti_helmholtz_pair(1e-3, 6e-4, 1.0);
        let err = field_jacobian(&assembly, Vec3::new(2e-4, 0.0, 1e-4), 8e-4);
        assert!(matches!(err, Err(FieldError::StepTooLarge { .. })));
    }
}
