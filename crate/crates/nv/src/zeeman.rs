//! Zeeman model and transition frequencies.

use crate::spin::hamiltonian;
use crate::NvError;
use fluxtrap_magnetics::Vec3;
use fluxtrap_numerics::eigen_hermitian_3x3;

/// Zero-field splitting and gyromagnetic ratio of the NV ground state.
#[derive(Clone, Copy, Debug)]
pub struct ZeemanModel {
    /// Hz; 2.877 GHz in the low-temperature limit.
    pub zero_field_splitting_hz: f64,
    /// Hz/T; about 28 GHz/T for the electron spin.
    pub gyromagnetic_ratio_hz_per_t: f64,
}

impl Default for ZeemanModel {
    fn default() -> Self {
        Self {
            zero_field_splitting_hz: 2.877e9,
            gyromagnetic_ratio_hz_per_t: 2.8e10,
        }
    }
}

impl ZeemanModel {
    pub fn new(d_hz: f64, gamma_hz_per_t: f64) -> Self {
        assert!(d_hz > 0.0 && gamma_hz_per_t > 0.0);
        Self {
            zero_field_splitting_hz: d_hz,
            gyromagnetic_ratio_hz_per_t: gamma_hz_per_t,
        }
    }
}

/// The two spin-transition frequencies out of the m_s = 0-like state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionPair {
    /// Hz; may run negative past the axial level crossing.
    pub lower: f64,
    pub upper: f64,
}

impl TransitionPair {
    pub fn splitting(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Transition frequencies of one NV orientation in a lab-frame field.
///
/// Only the angle between the field and the NV axis matters: the field
/// is rewritten in the NV frame as B0 (sin(theta), 0, cos(theta)), the
/// Hamiltonian diagonalised by Jacobi iteration, and the two transition
/// frequencies taken from the eigenstate with the dominant m_s = 0
/// character (which tracks the optically bright ground level through
/// the axial crossing). Results are sorted, lower first.
pub fn transition_frequencies(
    zm: &ZeemanModel,
    b_lab: Vec3,
    orientation: Vec3,
) -> Result<TransitionPair, NvError> {
    let norm = orientation.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(NvError::NonUnitOrientation { norm });
    }
    let b0 = b_lab.norm();
    let b_nv = if b0 == 0.0 {
        Vec3::ZERO
    } else {
        let cos_theta = (b_lab.dot(orientation) / b0).clamp(-1.0, 1.0);
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        Vec3::new(b0 * sin_theta, 0.0, b0 * cos_theta)
    };
    let h = hamiltonian(zm, b_nv);
    let (values, vectors) =
        eigen_hermitian_3x3(&h).expect("NV Hamiltonian is Hermitian by construction");

    // m_s = 0 amplitude is the middle component in this basis
    let mut ground = 0;
    let mut best = -1.0;
    for (k, v) in vectors.iter().enumerate() {
        let w = v[1].norm_sqr();
        if w > best {
            best = w;
            ground = k;
        }
    }
    let mut others = (0..3).filter(|&k| k != ground);
    let a = values[others.next().unwrap()] - values[ground];
    let b = values[others.next().unwrap()] - values[ground];
    Ok(TransitionPair {
        lower: a.min(b),
        upper: a.max(b),
    })
}
