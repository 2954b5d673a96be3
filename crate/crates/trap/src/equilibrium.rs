//! Equilibrium search in the inter-coil gap.

use crate::config::TrapConfig;
use crate::potential::potential_energy_with;
use crate::TrapError;
use fluxtrap_magnetics::Vec3;
use fluxtrap_numerics::{nelder_mead, NelderMeadOptions};

/// Locate the local minimiser of the levitation potential.
///
/// Runs Nelder-Mead from the geometric gap centre plus six axis-offset
/// restarts (+-separation/8 along each axis) and keeps the lowest
/// converged minimum that stays inside the gap region. Convergence is
/// simplex diameter below 1e-9 m and potential spread below 1e-24 J.
/// Candidates where the potential gradient has not actually vanished
/// (simplexes parked against the region boundary) are rejected, so a
/// trap without an interior minimum reports `NoMinimum` instead of a
/// boundary point.
pub fn find_equilibrium(cfg: &TrapConfig) -> Result<Vec3, TrapError> {
    let assembly = cfg.assembly();
    let center = cfg.gap_center();
    let offset = cfg.separation / 8.0;

    let mut starts = vec![center];
    for axis in 0..3 {
        starts.push(center + Vec3::axis(axis) * offset);
        starts.push(center - Vec3::axis(axis) * offset);
    }

    let opts = NelderMeadOptions {
        initial_step: cfg.separation / 20.0,
        x_tol: 1e-9,
        f_tol: 1e-24,
        max_iterations: 4000,
    };

    let mut best: Option<(Vec3, f64)> = None;
    for start in starts {
        // out-of-region excursions are softly rejected with a large
        // penalty so the simplex folds back into the gap
        let objective = |x: &[f64]| -> f64 {
            let p = Vec3::new(x[0], x[1], x[2]);
            if !cfg.in_gap_region(p) {
                return 1e3;
            }
            potential_energy_with(cfg, &assembly, p).unwrap_or(1e3)
        };
        let result = nelder_mead(objective, &[start.x, start.y, start.z], &opts);
        let p = Vec3::new(result.x[0], result.x[1], result.x[2]);
        if !result.converged || !cfg.in_gap_region(p) || result.f >= 1e3 {
            continue;
        }
        if !is_stationary(cfg, &assembly, p) {
            continue;
        }
        if best.is_none_or(|(_, f)| result.f < f) {
            best = Some((p, result.f));
        }
    }
    best.map(|(p, _)| p).ok_or(TrapError::NoMinimum)
}

/// True when |grad U| at `p` is below 1e-3 of the typical gradient
/// magnitude a probe distance away, i.e. the force really vanishes.
fn is_stationary(cfg: &TrapConfig, assembly: &fluxtrap_magnetics::Assembly, p: Vec3) -> bool {
    let Some(g0) = gradient_norm(cfg, assembly, p) else {
        return false;
    };
    let probe = (1e-4_f64).min(cfg.separation / 4.0);
    let mut typical = 0.0_f64;
    let mut samples = 0;
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            let q = p + Vec3::axis(axis) * (sign * probe);
            if !cfg.in_gap_region(q) {
                continue;
            }
            if let Some(g) = gradient_norm(cfg, assembly, q) {
                typical += g;
                samples += 1;
            }
        }
    }
    if samples == 0 {
        return false;
    }
    typical /= samples as f64;
    g0 < 1e-3 * typical
}

fn gradient_norm(
    cfg: &TrapConfig,
    assembly: &fluxtrap_magnetics::Assembly,
    p: Vec3,
) -> Option<f64> {
    let h = 1e-8;
    let mut acc = 0.0;
    for axis in 0..3 {
        let e = Vec3::axis(axis);
        let hi = potential_energy_with(cfg, assembly, p + e * h).ok()?;
        let lo = potential_energy_with(cfg, assembly, p - e * h).ok()?;
        let g = (hi - lo) / (2.0 * h);
        acc += g * g;
    }
    Some(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConcentratorDims;
    use crate::particle::Particle;
    use crate::potential::potential_energy;

    fn cfg(i_top: f64, i_bottom: f64, gravity: f64) -> TrapConfig {
        TrapConfig::anti_helmholtz(
            &ConcentratorDims::default(),
            1.2e-3,
            i_top,
            i_bottom,
            Particle::default(),
            gravity,
        )
        .unwrap()
    }

    #[test]
    fn symmetric_currents_no_gravity_sits_on_the_midplane() {
        let cfg = cfg(1.0, 1.0, 0.0);
        let r0 = find_equilibrium(&cfg).unwrap();
        assert!(r0.z.abs() < 1e-7, "midplane offset {:.3e} m", r0.z);
    }

    #[test]
    fn gravity_pulls_the_equilibrium_down() {
        let up = find_equilibrium(&cfg(1.0, 1.0, 0.0)).unwrap();
        let down = find_equilibrium(&cfg(1.0, 1.0, 9.81)).unwrap();
        assert!(down.z < up.z - 1e-6, "gravity sag {:.3e} m", up.z - down.z);
    }

    #[test]
    fn weakening_the_bottom_coil_shifts_along_the_slit() {
        // fixed top current, decreasing bottom current: the minimum walks
        // monotonically along the slit (x) direction
        let mut xs = Vec::new();
        for i_bottom in [0.8, 0.7, 0.6, 0.5, 0.4] {
            let r0 = find_equilibrium(&cfg(1.1, i_bottom, 9.81)).unwrap();
            xs.push(r0.x);
        }
        let span = xs.iter().cloned().fold(f64::MIN, f64::max)
            - xs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(span > 1e-5, "slit-direction walk too small: {:?}", xs);
        let increasing = xs.windows(2).all(|w| w[1] > w[0]);
        let decreasing = xs.windows(2).all(|w| w[1] < w[0]);
        assert!(
            increasing || decreasing,
            "shift along slit is not monotone: {:?}",
            xs
        );
    }

    #[test]
    fn gradient_vanishes_at_the_reported_equilibrium() {
        let cfg = cfg(1.0, 1.0, 9.81);
        let r0 = find_equilibrium(&cfg).unwrap();
        let h = 1e-8;
        let mut grad = [0.0_f64; 3];
        for (j, g) in grad.iter_mut().enumerate() {
            let e = Vec3::axis(j);
            let hi = potential_energy(&cfg, r0 + e * h).unwrap();
            let lo = potential_energy(&cfg, r0 - e * h).unwrap();
            *g = (hi - lo) / (2.0 * h);
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        // compare against the typical gradient magnitude 100 um away
        let probe = r0 + Vec3::new(1e-4, 0.0, 0.0);
        let hi = potential_energy(&cfg, probe + Vec3::X * h).unwrap();
        let lo = potential_energy(&cfg, probe - Vec3::X * h).unwrap();
        let typical = ((hi - lo) / (2.0 * h)).abs();
        assert!(
            gnorm < 1e-3 * typical,
            "residual gradient {gnorm:.3e} vs typical {typical:.3e}"
        );
    }

    #[test]
    fn co_circulating_coils_have_no_gap_minimum() {
        // flipping one current removes the field zero between the coils
        let cfg = cfg(1.0, -1.0, 0.0);
        assert!(matches!(find_equilibrium(&cfg), Err(TrapError::NoMinimum)));
    }
}
