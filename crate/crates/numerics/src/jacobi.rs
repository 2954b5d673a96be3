//! Jacobi eigensolver for real symmetric 3x3 matrices.
//!
//! Cyclic Jacobi rotations as in Numerical Recipes section 11.1; for a 3x3
//! symmetric matrix convergence to machine precision takes a handful of
//! sweeps and is unconditionally stable.

use crate::NumericsError;

const MAX_SWEEPS: usize = 50;

/// Eigenvalues and eigenvectors of a symmetric 3x3 matrix.
///
/// Returns `(values, vectors)` with eigenvalues sorted ascending and
/// `vectors[i]` the unit eigenvector belonging to `values[i]`.
/// The input is symmetrised as `(a + a^T)/2` before iterating, so minor
/// asymmetry from finite differencing is tolerated.
pub fn eigen_symmetric_3x3(a: &[[f64; 3]; 3]) -> Result<([f64; 3], [[f64; 3]; 3]), NumericsError> {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }
    let scale = m
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);

    let mut v = [[0.0; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _ in 0..MAX_SWEEPS {
        let off = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
        if off.sqrt() <= 1e-15 * scale {
            return Ok(sorted(&m, &v));
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                if m[p][q].abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // rotate rows/columns p and q
                let mpp = m[p][p];
                let mqq = m[q][q];
                let mpq = m[p][q];
                m[p][p] = c * c * mpp - 2.0 * s * c * mpq + s * s * mqq;
                m[q][q] = s * s * mpp + 2.0 * s * c * mpq + c * c * mqq;
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for k in 0..3 {
                    if k != p && k != q {
                        let mkp = m[k][p];
                        let mkq = m[k][q];
                        m[k][p] = c * mkp - s * mkq;
                        m[p][k] = m[k][p];
                        m[k][q] = s * mkp + c * mkq;
                        m[q][k] = m[k][q];
                    }
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    Err(NumericsError::EigenNotConverged { sweeps: MAX_SWEEPS })
}

fn sorted(m: &[[f64; 3]; 3], v: &[[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = m[idx][idx];
        for k in 0..3 {
            vectors[slot][k] = v[k][idx];
        }
    }
    (values, vectors)
}
