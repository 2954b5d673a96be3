//! Ringdown simulation and damped-sinusoid fitting.

use crate::psd::psd;
use crate::timeseries::TimeSeries;
use crate::DynamicsError;
use fluxtrap_numerics::{levenberg_marquardt, linear_fit, LmOptions};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::f64::consts::PI;

/// Parameters of a synthetic driven-then-released ringdown.
#[derive(Clone, Copy, Debug)]
pub struct RingdownSpec {
    /// Hz.
    pub f0: f64,
    /// s, amplitude decay time.
    pub tau: f64,
    /// m.
    pub amplitude: f64,
    /// rad, phase at the release instant.
    pub phase: f64,
    /// m, static offset.
    pub offset: f64,
    /// s, steady driven segment before release (may be zero).
    pub drive_duration: f64,
    /// s, recorded ringdown after release.
    pub record_duration: f64,
    /// Hz.
    pub sample_rate: f64,
    /// m, RMS of additive Gaussian noise.
    pub noise_rms: f64,
    pub seed: u64,
}

impl Default for RingdownSpec {
    fn default() -> Self {
        Self {
            f0: 20.0,
            tau: 10.0,
            amplitude: 1e-6,
            phase: 0.0,
            offset: 0.0,
            drive_duration: 0.0,
            record_duration: 40.0,
            sample_rate: 500.0,
            noise_rms: 0.0,
            seed: 0,
        }
    }
}

/// Generate a ringdown record: a steady sinusoid at the resonance for
/// the drive window, then an exponentially decaying sinusoid, phase
/// continuous at release, plus seeded Gaussian noise.
pub fn simulate_ringdown(spec: &RingdownSpec) -> Result<TimeSeries, DynamicsError> {
    if spec.sample_rate <= 10.0 * spec.f0 {
        return Err(DynamicsError::Undersampled {
            sample_rate: spec.sample_rate,
            f0: spec.f0,
        });
    }
    assert!(spec.record_duration > 0.0 && spec.drive_duration >= 0.0);
    assert!(spec.f0 > 0.0 && spec.tau > 0.0);

    let dt = 1.0 / spec.sample_rate;
    let n = ((spec.drive_duration + spec.record_duration) * spec.sample_rate).round() as usize;
    let release = spec.drive_duration;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            let envelope = if t < release {
                1.0
            } else {
                (-(t - release) / spec.tau).exp()
            };
            let clean = spec.amplitude
                * envelope
                * (2.0 * PI * spec.f0 * (t - release) + spec.phase).cos()
                + spec.offset;
            clean + spec.noise_rms * gaussian(&mut rng)
        })
        .collect();
    TimeSeries::new(0.0, dt, samples)
}

/// Polar Box-Muller on the ChaCha stream; deterministic per seed.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// A fitted damped sinusoid.
#[derive(Clone, Copy, Debug)]
pub struct RingdownFit {
    /// Hz.
    pub f0: f64,
    /// s.
    pub tau: f64,
    /// m, amplitude at the fit start.
    pub amplitude: f64,
    /// rad, phase at the fit start.
    pub phase: f64,
    /// m.
    pub offset: f64,
    /// pi f0 tau, composed exactly from the fitted fields.
    pub q: f64,
    /// m.
    pub residual_rms: f64,
    /// Index into the input series where the fit window began.
    pub start_index: usize,
}

impl RingdownFit {
    pub fn key_value_report(&self) -> String {
        use fluxtrap_numerics::format_exp9 as fmt;
        format!(
            "f0_hz={}\ntau_s={}\namplitude_m={}\nphase_rad={}\noffset_m={}\nq={}\nresidual_rms={}\n",
            fmt(self.f0),
            fmt(self.tau),
            fmt(self.amplitude),
            fmt(self.phase),
            fmt(self.offset),
            fmt(self.q),
            fmt(self.residual_rms)
        )
    }
}

/// Mechanical quality factor of a ringdown: Q = pi f0 tau.
pub fn quality_factor(f0: f64, tau: f64) -> f64 {
    assert!(f0 > 0.0 && tau > 0.0, "need positive frequency and decay time");
    PI * f0 * tau
}

/// Fit a ringdown, auto-detecting the release point.
///
/// The release is taken as the last rectified-envelope peak within 10%
/// of the robust envelope maximum; everything after it is the decay
/// window. Use [`fit_ringdown_from`] when the release index is known.
pub fn fit_ringdown(ts: &TimeSeries) -> Result<RingdownFit, DynamicsError> {
    let start = detect_release(ts);
    fit_ringdown_from(ts, start)
}

/// Fit the damped sinusoid x(t) = A exp(-(t-t0)/tau) cos(2 pi f0 (t-t0)
/// + phi) + c over the series tail starting at `start_index`.
///
/// Initialisation: f0 from the dominant spectral peak (parabolic
/// refinement), tau from a log-linear fit of the rectified-peak
/// envelope, amplitude and phase from a linear solve over a small f0
/// candidate scan; then full nonlinear least squares over all five
/// parameters.
pub fn fit_ringdown_from(ts: &TimeSeries, start_index: usize) -> Result<RingdownFit, DynamicsError> {
    let tail = ts.slice_from(start_index)?;
    let n = tail.len();
    let dt = tail.dt;

    // a flat record leaves only roundoff dust after detrending; reject
    // it before the spectral peak test can mistake dust for a signal
    let scale = tail.samples.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    if tail.variance() <= (1e-12 * scale.max(f64::MIN_POSITIVE)).powi(2) {
        return Err(DynamicsError::NoOscillation { ratio: 0.0 });
    }

    // spectral init with an oscillation sanity check
    let (f0_coarse, bin) = dominant_frequency(&tail)?;
    let offset0 = tail.mean();
    let detrended: Vec<f64> = tail.samples.iter().map(|&x| x - offset0).collect();
    let tau0 = envelope_decay_time(&detrended, dt).unwrap_or(tail.duration());

    // linear amplitude/phase solve on a small frequency scan around the
    // spectral peak; the record is long, so the cost in f0 is sharply
    // multimodal and the scan pins the right basin
    let mut best: Option<(f64, f64, f64, f64)> = None; // (sse, f0, a, b)
    let candidates = 25;
    for k in 0..candidates {
        let f = f0_coarse + bin * (k as f64 - (candidates - 1) as f64 / 2.0) / 8.0;
        if f <= 0.0 {
            continue;
        }
        let (a, b, sse) = quadrature_amplitudes(&detrended, dt, f, tau0);
        if best.is_none_or(|(s, ..)| sse < s) {
            best = Some((sse, f, a, b));
        }
    }
    let (_, f0_init, a_init, b_init) = best.expect("candidate scan is non-empty");
    let amp0 = (a_init * a_init + b_init * b_init).sqrt().max(1e-300);
    let phase0 = f64::atan2(-b_init, a_init);

    // video-tracked records carry occasional glitch points where the
    // tracker lost the particle; points further than 5 sigma from a
    // short moving median are Huber down-weighted so they cannot steer
    // the fit (clean records are left untouched)
    let weights = outlier_weights(&tail.samples);

    let samples = tail.samples.clone();
    let residuals = move |p: &[f64]| -> Vec<f64> {
        let (a, f0, phi, tau, c) = (p[0], p[1], p[2], p[3], p[4]);
        samples
            .iter()
            .zip(&weights)
            .enumerate()
            .map(|(i, (&x, &w))| {
                let t = i as f64 * dt;
                w * (a * (-t / tau).exp() * (2.0 * PI * f0 * t + phi).cos() + c - x)
            })
            .collect()
    };
    let opts = LmOptions {
        max_iterations: 300,
        cost_rel_tol: 1e-12,
        lambda_init: 1e-4,
        scales: vec![amp0, f0_init.max(bin), 1.0, tau0, amp0],
    };
    let fit = levenberg_marquardt(
        residuals,
        &[amp0, f0_init, phase0, tau0, offset0],
        &opts,
    )
    .map_err(|e| DynamicsError::FitNotConverged(e.to_string()))?;

    let mut a = fit.params[0];
    let f0 = fit.params[1].abs();
    let mut phi = fit.params[2];
    let tau = fit.params[3].abs();
    let c = fit.params[4];
    if a < 0.0 {
        a = -a;
        phi += PI;
    }
    phi = phi.rem_euclid(2.0 * PI);
    if f0 <= 0.0 || tau <= 0.0 || !f0.is_finite() || !tau.is_finite() {
        return Err(DynamicsError::FitNotConverged(format!(
            "degenerate parameters f0 = {f0}, tau = {tau}"
        )));
    }
    Ok(RingdownFit {
        f0,
        tau,
        amplitude: a,
        phase: phi,
        offset: c,
        q: quality_factor(f0, tau),
        residual_rms: (fit.cost / n as f64).sqrt(),
        start_index,
    })
}

/// Dominant spectral frequency with parabolic refinement, plus the bin
/// width. Errors with `NoOscillation` when the peak is indistinct.
fn dominant_frequency(ts: &TimeSeries) -> Result<(f64, f64), DynamicsError> {
    // single full-length segment: the finest frequency resolution the
    // record allows, which the f0 initialisation needs
    let seg = ts.len().min(1 << 18);
    let spectrum = psd(ts, seg, 0.0)?;
    // skip DC
    let (mut peak_idx, mut peak) = (1usize, 0.0_f64);
    for (i, &p) in spectrum.power.iter().enumerate().skip(1) {
        if p > peak {
            peak = p;
            peak_idx = i;
        }
    }
    let mut sorted: Vec<f64> = spectrum.power[1..].to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let ratio = peak / median.max(f64::MIN_POSITIVE);
    if ratio < 3.0 {
        return Err(DynamicsError::NoOscillation { ratio });
    }
    // parabolic interpolation on log power
    let refined = if peak_idx + 1 < spectrum.power.len() && peak_idx >= 1 {
        let l = spectrum.power[peak_idx - 1].max(f64::MIN_POSITIVE).ln();
        let c = spectrum.power[peak_idx].max(f64::MIN_POSITIVE).ln();
        let r = spectrum.power[peak_idx + 1].max(f64::MIN_POSITIVE).ln();
        let denom = l - 2.0 * c + r;
        let shift = if denom.abs() > 1e-12 {
            (0.5 * (l - r) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        (peak_idx as f64 + shift) * spectrum.df
    } else {
        peak_idx as f64 * spectrum.df
    };
    Ok((refined, spectrum.df))
}

/// Log-linear decay time of the rectified-peak envelope.
fn envelope_decay_time(detrended: &[f64], dt: f64) -> Option<f64> {
    let mut peak_times = Vec::new();
    let mut peak_logs = Vec::new();
    let max_abs = detrended.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    if max_abs <= 0.0 {
        return None;
    }
    for i in 1..detrended.len() - 1 {
        let a = detrended[i].abs();
        if a > detrended[i - 1].abs() && a >= detrended[i + 1].abs() && a > 0.05 * max_abs {
            peak_times.push(i as f64 * dt);
            peak_logs.push(a.ln());
        }
    }
    if peak_times.len() < 4 {
        return None;
    }
    let fit = linear_fit(&peak_times, &peak_logs);
    if fit.slope < -1e-12 {
        Some(-1.0 / fit.slope)
    } else {
        // no visible decay over the record: treat the window length as
        // the decay scale and let the nonlinear fit take over
        None
    }
}

/// Square-rooted Huber weights against tracking glitches: points whose
/// deviation from a 5-sample moving median exceeds 5 robust sigma get
/// weight (5 sigma / |deviation|)^(1/2); everything else stays at one.
fn outlier_weights(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut deviations = Vec::with_capacity(n);
    let mut window = [0.0_f64; 5];
    for i in 0..n {
        let lo = i.saturating_sub(2);
        let hi = (i + 3).min(n);
        let local = &samples[lo..hi];
        let m = local.len();
        window[..m].copy_from_slice(local);
        window[..m].sort_by(|a, b| a.partial_cmp(b).unwrap());
        deviations.push(samples[i] - window[m / 2]);
    }
    let mut magnitudes: Vec<f64> = deviations.iter().map(|d| d.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sigma = 1.4826 * magnitudes[n / 2];
    if sigma <= 0.0 {
        return vec![1.0; n];
    }
    deviations
        .iter()
        .map(|d| {
            let r = d.abs() / (5.0 * sigma);
            if r > 1.0 {
                (1.0 / r).sqrt()
            } else {
                1.0
            }
        })
        .collect()
}

/// Least-squares in-phase/quadrature amplitudes at fixed (f0, tau):
/// x ~ a cos(w t) e^(-t/tau) + b sin(w t) e^(-t/tau), returning the sum
/// of squared residuals as the scan figure of merit.
fn quadrature_amplitudes(detrended: &[f64], dt: f64, f0: f64, tau: f64) -> (f64, f64, f64) {
    let w = 2.0 * PI * f0;
    let (mut scc, mut sss, mut scs, mut sxc, mut sxs, mut sxx) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &x) in detrended.iter().enumerate() {
        let t = i as f64 * dt;
        let e = (-t / tau).exp();
        let cc = e * (w * t).cos();
        let ss = e * (w * t).sin();
        scc += cc * cc;
        sss += ss * ss;
        scs += cc * ss;
        sxc += x * cc;
        sxs += x * ss;
        sxx += x * x;
    }
    let det = scc * sss - scs * scs;
    if det.abs() < 1e-300 {
        return (0.0, 0.0, sxx);
    }
    let a = (sxc * sss - sxs * scs) / det;
    let b = (sxs * scc - sxc * scs) / det;
    let sse = sxx - a * sxc - b * sxs;
    (a, b, sse)
}

/// Index of the last envelope peak within 10% of the robust maximum;
/// the decay window starts there.
fn detect_release(ts: &TimeSeries) -> usize {
    let mean = ts.mean();
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for i in 1..ts.len() - 1 {
        let a = (ts.samples[i] - mean).abs();
        if a > (ts.samples[i - 1] - mean).abs() && a >= (ts.samples[i + 1] - mean).abs() {
            peaks.push((i, a));
        }
    }
    if peaks.is_empty() {
        return 0;
    }
    let mut magnitudes: Vec<f64> = peaks.iter().map(|&(_, a)| a).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let robust_idx = ((magnitudes.len() as f64 * 0.95) as usize).min(magnitudes.len() - 1);
    let robust_max = magnitudes[robust_idx];
    peaks
        .iter()
        .rev()
        .find(|&&(_, a)| a >= 0.9 * robust_max)
        .map(|&(i, _)| i)
        .unwrap_or(0)
}
