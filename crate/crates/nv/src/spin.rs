//! Spin-1 operators and the NV ground-state Hamiltonian.

use crate::zeeman::ZeemanModel;
use fluxtrap_magnetics::Vec3;
use fluxtrap_numerics::CMat3;
use num_complex::Complex64;

const SQRT1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The spin-1 matrices in the m_s = (+1, 0, -1) basis.
pub struct SpinOperators;

impl SpinOperators {
    pub fn sx() -> CMat3 {
        [
            [c(0.0, 0.0), c(SQRT1_2, 0.0), c(0.0, 0.0)],
            [c(SQRT1_2, 0.0), c(0.0, 0.0), c(SQRT1_2, 0.0)],
            [c(0.0, 0.0), c(SQRT1_2, 0.0), c(0.0, 0.0)],
        ]
    }

    pub fn sy() -> CMat3 {
        [
            [c(0.0, 0.0), c(0.0, -SQRT1_2), c(0.0, 0.0)],
            [c(0.0, SQRT1_2), c(0.0, 0.0), c(0.0, -SQRT1_2)],
            [c(0.0, 0.0), c(0.0, SQRT1_2), c(0.0, 0.0)],
        ]
    }

    pub fn sz() -> CMat3 {
        [
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ]
    }
}

/// NV ground-state Hamiltonian over h, in Hz, with the field expressed
/// in the NV frame (z along the NV axis):
/// H/h = D Sz^2 + gamma (Bx Sx + By Sy + Bz Sz).
pub fn hamiltonian(zm: &ZeemanModel, b_nv: Vec3) -> CMat3 {
    let d = zm.zero_field_splitting_hz;
    let g = zm.gyromagnetic_ratio_hz_per_t;
    let (bx, by, bz) = (g * b_nv.x, g * b_nv.y, g * b_nv.z);
    let off_upper = c(bx, -by) * SQRT1_2;
    let off_lower = c(bx, by) * SQRT1_2;
    [
        [c(d + bz, 0.0), off_upper, c(0.0, 0.0)],
        [off_lower, c(0.0, 0.0), off_upper],
        [c(0.0, 0.0), off_lower, c(d - bz, 0.0)],
    ]
}
