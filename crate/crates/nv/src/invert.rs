//! Field inversion from observed transition frequencies.

use crate::diamond::{DiamondCut100, NV_TO_NORMAL_ANGLE};
use crate::zeeman::{transition_frequencies, ZeemanModel};
use crate::NvError;
use fluxtrap_magnetics::Vec3;
use fluxtrap_numerics::{levenberg_marquardt, LmOptions};

/// Search cap for the magnitude inversion, T.
const MAGNITUDE_CAP: f64 = 1.0;

/// Result of a magnitude or vector inversion.
#[derive(Clone, Debug)]
pub struct FieldEstimate {
    /// T.
    pub magnitude: f64,
    /// Lab-frame vector when the inversion constrains one. ODMR spectra
    /// are even in B, so the representative with non-negative z is
    /// returned.
    pub vector: Option<Vec3>,
    /// Hz, per observed transition, model minus observation.
    pub residuals: Vec<f64>,
    /// T, crude 1-sigma scale from the residual level.
    pub uncertainty: f64,
}

/// Which of the two spin transitions an observation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Lower,
    Upper,
}

/// One labelled ODMR line: which orientation family and branch it is,
/// and where it sits.
#[derive(Clone, Copy, Debug)]
pub struct ObservedTransition {
    /// Index into [`DiamondCut100::axes`], 0..4.
    pub orientation: usize,
    pub branch: Branch,
    pub frequency_hz: f64,
}

/// Field magnitude from one observed transition pair.
///
/// Solves for B0 such that the model splitting at angle `theta` between
/// field and NV axis matches `f_plus - f_minus`: coarse bisection over
/// [0, 1 T] followed by Newton polishing until the splitting matches to
/// 1 Hz. The default angle for an out-of-plane field on a (100) cut is
/// [`NV_TO_NORMAL_ANGLE`].
pub fn invert_field_magnitude(
    zm: &ZeemanModel,
    f_minus: f64,
    f_plus: f64,
    theta: f64,
) -> Result<FieldEstimate, NvError> {
    if f_plus < f_minus {
        return Err(NvError::InvalidInput(
            "upper transition below lower transition".into(),
        ));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(NvError::InvalidInput(
            "angle must lie in [0, pi/2]".into(),
        ));
    }
    let target = f_plus - f_minus;
    let axis = Vec3::Z;
    let splitting = |b0: f64| -> f64 {
        let b = Vec3::new(b0 * theta.sin(), 0.0, b0 * theta.cos());
        transition_frequencies(zm, b, axis)
            .expect("unit axis")
            .splitting()
    };

    if target == 0.0 {
        return Ok(FieldEstimate {
            magnitude: 0.0,
            vector: None,
            residuals: vec![0.0, 0.0],
            uncertainty: 0.0,
        });
    }
    if splitting(MAGNITUDE_CAP) < target {
        return Err(NvError::NoSolution {
            splitting: target,
            cap: MAGNITUDE_CAP,
        });
    }

    // bisection bracket, then Newton with a finite-difference slope
    let (mut lo, mut hi) = (0.0_f64, MAGNITUDE_CAP);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if splitting(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut b0 = 0.5 * (lo + hi);
    for _ in 0..40 {
        let err = splitting(b0) - target;
        if err.abs() < 1.0 {
            break;
        }
        let h = (1e-6 * b0).max(1e-9);
        let slope = (splitting(b0 + h) - splitting(b0 - h)) / (2.0 * h);
        if !slope.is_finite() || slope.abs() < 1e-30 {
            break;
        }
        b0 = (b0 - err / slope).clamp(0.0, MAGNITUDE_CAP);
    }

    let b = Vec3::new(b0 * theta.sin(), 0.0, b0 * theta.cos());
    let pair = transition_frequencies(zm, b, axis).expect("unit axis");
    let slope = {
        let h = (1e-6 * b0).max(1e-9);
        ((splitting(b0 + h) - splitting(b0 - h)) / (2.0 * h)).abs()
    };
    let residual = pair.splitting() - target;
    Ok(FieldEstimate {
        magnitude: b0,
        vector: None,
        residuals: vec![pair.lower - f_minus, pair.upper - f_plus],
        uncertainty: if slope > 0.0 { residual.abs().max(1.0) / slope } else { 0.0 },
    })
}

/// Convenience: the default inversion angle for an out-of-plane field.
pub fn default_inversion_angle() -> f64 {
    NV_TO_NORMAL_ANGLE
}

/// Full vector reconstruction from labelled transitions across the four
/// orientations.
///
/// Least squares over B in R^3 of the model-minus-observed frequencies,
/// restarted from eight octant seeds. ODMR is even in B, so the
/// solution is reported as the representative with B_z >= 0.
pub fn reconstruct_field_vector(
    zm: &ZeemanModel,
    cut: &DiamondCut100,
    observations: &[ObservedTransition],
) -> Result<FieldEstimate, NvError> {
    for obs in observations {
        if obs.orientation >= 4 {
            return Err(NvError::BadOrientationLabel {
                label: obs.orientation,
            });
        }
    }
    let distinct = {
        let mut seen = [false; 4];
        for obs in observations {
            seen[obs.orientation] = true;
        }
        seen.iter().filter(|&&s| s).count()
    };
    if observations.len() < 3 || distinct < 2 {
        return Err(NvError::Underdetermined {
            transitions: observations.len(),
            orientations: distinct,
        });
    }

    // magnitude scale seed from the mean Zeeman offset
    let d = zm.zero_field_splitting_hz;
    let gamma = zm.gyromagnetic_ratio_hz_per_t;
    let mean_offset = observations
        .iter()
        .map(|o| (o.frequency_hz - d).abs())
        .sum::<f64>()
        / observations.len() as f64;
    let seed_mag = (mean_offset / gamma).max(1e-5);

    let obs = observations.to_vec();
    let cut_axes = *cut.axes();
    let zmc = *zm;
    let residuals = move |p: &[f64]| -> Vec<f64> {
        let b = Vec3::new(p[0], p[1], p[2]);
        obs.iter()
            .map(|o| {
                let pair = transition_frequencies(&zmc, b, cut_axes[o.orientation])
                    .expect("unit axes");
                let model = match o.branch {
                    Branch::Lower => pair.lower,
                    Branch::Upper => pair.upper,
                };
                model - o.frequency_hz
            })
            .collect()
    };

    let opts = LmOptions {
        max_iterations: 200,
        cost_rel_tol: 1e-14,
        lambda_init: 1e-3,
        scales: vec![seed_mag; 3],
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let s = seed_mag / 3.0_f64.sqrt();
    let mut starts: Vec<[f64; 3]> = Vec::with_capacity(14);
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                starts.push([sx * s, sy * s, sz * s]);
            }
        }
    }
    // octant seeds coincide with the NV axes; fields near a cubic axis
    // need on-axis starts to escape the symmetric saddle between them
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            let mut v = [0.0; 3];
            v[axis] = sign * seed_mag;
            starts.push(v);
        }
    }
    for start in starts {
        if let Ok(fit) = levenberg_marquardt(&residuals, &start, &opts) {
            if best.as_ref().is_none_or(|(_, c)| fit.cost < *c) {
                best = Some((fit.params, fit.cost));
            }
        }
    }
    let (params, _cost) =
        best.ok_or_else(|| NvError::FitNotConverged("all octant starts diverged".into()))?;
    let mut b = Vec3::new(params[0], params[1], params[2]);
    if b.z < 0.0 {
        b = -b;
    }
    let final_residuals = residuals(&[b.x, b.y, b.z]);
    let rms = (final_residuals.iter().map(|r| r * r).sum::<f64>()
        / final_residuals.len() as f64)
        .sqrt();
    Ok(FieldEstimate {
        magnitude: b.norm(),
        vector: Some(b),
        residuals: final_residuals,
        uncertainty: rms / gamma,
    })
}
