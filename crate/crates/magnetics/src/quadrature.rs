//! Adaptive Gauss-Kronrod quadrature for vector-valued integrands.
//!
//! G7/K15 pair with recursive bisection; the embedded Gauss rule gives
//! the error estimate per panel. Used for partial-arc Biot-Savart
//! integrals, where the integrand is smooth away from the filament.

use crate::vec3::Vec3;

// K15 abscissae (positive half) and weights; G7 weights at the shared nodes.
const XK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Integrate a `Vec3`-valued function over `[a, b]` to relative tolerance
/// `rel_tol` (on the vector norm). Recursion depth is capped; panels at
/// the cap are accepted as-is, which for these smooth integrands only
/// happens when the requested tolerance sits below roundoff.
pub fn integrate_vec3<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Vec3
where
    F: Fn(f64) -> Vec3,
{
    let (value, _err) = panel(f, a, b);
    adapt(f, a, b, rel_tol, value, 0)
}

fn adapt<F>(f: &F, a: f64, b: f64, rel_tol: f64, whole: Vec3, depth: usize) -> Vec3
where
    F: Fn(f64) -> Vec3,
{
    let mid = 0.5 * (a + b);
    let (left, le) = panel(f, a, mid);
    let (right, re) = panel(f, mid, b);
    let refined = left + right;
    let err = le + re + (refined - whole).norm();
    if depth >= 28 || err <= rel_tol * refined.norm().max(f64::MIN_POSITIVE) {
        return refined;
    }
    adapt(f, a, mid, rel_tol, left, depth + 1) + adapt(f, mid, b, rel_tol, right, depth + 1)
}

/// One K15 panel; returns (integral, |K15 - G7| error estimate).
fn panel<F>(f: &F, a: f64, b: f64) -> (Vec3, f64)
where
    F: Fn(f64) -> Vec3,
{
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut k = Vec3::ZERO;
    let mut g = Vec3::ZERO;
    for (i, (&x, &wk)) in XK.iter().zip(WK.iter()).enumerate() {
        if x == 0.0 {
            let v = f(center);
            k += v * wk;
            g += v * WG[3];
        } else {
            let v1 = f(center - half * x);
            let v2 = f(center + half * x);
            k += (v1 + v2) * wk;
            // odd Kronrod indices are the embedded Gauss nodes
            if i % 2 == 1 {
                g += (v1 + v2) * WG[i / 2];
            }
        }
    }
    ((k * half), (k - g).norm() * half.abs())
}
