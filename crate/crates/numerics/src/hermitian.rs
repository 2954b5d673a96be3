//! Jacobi eigenvalues for complex Hermitian 3x3 matrices.
//!
//! Each rotation annihilates one off-diagonal element with a complex
//! (phase-carrying) plane rotation; the scheme is the direct Hermitian
//! analogue of the classical real Jacobi iteration.

use crate::NumericsError;
use num_complex::Complex64;

/// Dense complex 3x3 matrix in row-major order.
pub type CMat3 = [[Complex64; 3]; 3];

const MAX_SWEEPS: usize = 60;

/// Eigenvalues of a Hermitian 3x3 matrix, sorted ascending.
pub fn eigenvalues_hermitian_3x3(h: &CMat3) -> Result<[f64; 3], NumericsError> {
    eigen_hermitian_3x3(h).map(|(vals, _)| vals)
}

/// Eigenvalues (ascending) and matching unit eigenvectors of a Hermitian
/// 3x3 matrix; `vectors[k]` belongs to `values[k]`, components in the
/// input basis.
///
/// Iterates until the off-diagonal Frobenius norm drops below
/// `1e-12 * ||H||`. Errors if the input is not Hermitian to 1e-9 of its
/// norm or if the sweep budget is exhausted (which does not happen for
/// finite Hermitian input).
pub fn eigen_hermitian_3x3(
    h: &CMat3,
) -> Result<([f64; 3], [[Complex64; 3]; 3]), NumericsError> {
    let norm = frobenius(h).max(f64::MIN_POSITIVE);
    for i in 0..3 {
        for j in 0..3 {
            if (h[i][j] - h[j][i].conj()).norm() > 1e-9 * norm {
                return Err(NumericsError::InvalidInput(
                    "matrix is not Hermitian".into(),
                ));
            }
        }
    }

    let mut a = *h;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut v: CMat3 = [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
    for _ in 0..MAX_SWEEPS {
        let off = (a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr()).sqrt();
        if off <= 1e-12 * norm {
            return Ok(sorted_pairs(&a, &v));
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    Err(NumericsError::EigenNotConverged { sweeps: MAX_SWEEPS })
}

fn sorted_pairs(a: &CMat3, v: &CMat3) -> ([f64; 3], [[Complex64; 3]; 3]) {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap());
    let mut values = [0.0; 3];
    let mut vectors = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = a[idx][idx].re;
        for k in 0..3 {
            vectors[slot][k] = v[k][idx];
        }
    }
    (values, vectors)
}

/// One Hermitian Jacobi rotation zeroing a[p][q], accumulating the
/// unitary in `v` (columns become eigenvectors).
fn rotate(a: &mut CMat3, v: &mut CMat3, p: usize, q: usize) {
    let apq = a[p][q];
    let mag = apq.norm();
    if mag <= f64::MIN_POSITIVE {
        return;
    }
    // phase so that the rotated off-diagonal element is real
    let phase = apq / mag;
    let diff = a[q][q].re - a[p][p].re;
    let theta = 0.5 * (2.0 * mag).atan2(diff);
    let c = theta.cos();
    let s = theta.sin();

    // columns: v_p' = c v_p - s e^{-i phi} v_q ; v_q' = s e^{i phi} v_p + c v_q
    let cp = Complex64::new(c, 0.0);
    let sp = phase * s;
    let mut b = *a;
    for k in 0..3 {
        b[k][p] = cp * a[k][p] - sp.conj() * a[k][q];
        b[k][q] = sp * a[k][p] + cp * a[k][q];
    }
    let mut out = b;
    for k in 0..3 {
        out[p][k] = cp * b[p][k] - sp * b[q][k];
        out[q][k] = sp.conj() * b[p][k] + cp * b[q][k];
    }
    // enforce exact hermiticity of the updated pivot entries
    out[p][q] = 0.5 * (out[p][q] + out[q][p].conj());
    out[q][p] = out[p][q].conj();
    out[p][p] = Complex64::new(out[p][p].re, 0.0);
    out[q][q] = Complex64::new(out[q][q].re, 0.0);
    *a = out;

    for k in 0..3 {
        let vp = v[k][p];
        let vq = v[k][q];
        v[k][p] = cp * vp - sp.conj() * vq;
        v[k][q] = sp * vp + cp * vq;
    }
}

fn frobenius(h: &CMat3) -> f64 {
    h.iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}
