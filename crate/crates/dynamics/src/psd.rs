//! Welch-averaged power spectral density.
//!
//! Hann-windowed, mean-detrended, overlapping segments; one-sided
//! density normalised so that the integral over frequency returns the
//! series variance (Parseval).

use crate::timeseries::TimeSeries;
use crate::DynamicsError;
use rustfft::{num_complex::Complex, FftPlanner};

use std::f64::consts::PI;

/// One-sided power spectral density estimate.
#[derive(Clone, Debug)]
pub struct Psd {
    /// Hz, starting at DC.
    pub frequencies: Vec<f64>,
    /// m^2/Hz.
    pub power: Vec<f64>,
    /// Hz, bin width.
    pub df: f64,
}

impl Psd {
    /// Integral of the density over frequency, m^2.
    pub fn integrated_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.df
    }

    /// Frequency of the largest non-DC bin, Hz.
    pub fn peak_frequency(&self) -> f64 {
        let mut best = (1usize, 0.0_f64);
        for (i, &p) in self.power.iter().enumerate().skip(1) {
            if p > best.1 {
                best = (i, p);
            }
        }
        self.frequencies[best.0]
    }
}

/// Welch estimate with `segment_length` samples per segment and
/// fractional `overlap` in [0, 0.9].
pub fn psd(ts: &TimeSeries, segment_length: usize, overlap: f64) -> Result<Psd, DynamicsError> {
    let n = ts.len();
    if segment_length > n {
        return Err(DynamicsError::TooShort {
            len: n,
            need: segment_length,
        });
    }
    if segment_length < 16 {
        return Err(DynamicsError::TooShort {
            len: segment_length,
            need: 16,
        });
    }
    if !(0.0..=0.9).contains(&overlap) {
        return Err(DynamicsError::Format("overlap must lie in [0, 0.9]".into()));
    }

    let fs = ts.sample_rate();
    let m = segment_length;
    let hop = ((m as f64) * (1.0 - overlap)).round().max(1.0) as usize;
    let window: Vec<f64> = (0..m)
        .map(|k| 0.5 * (1.0 - (2.0 * PI * k as f64 / m as f64).cos()))
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let bins = m / 2 + 1;
    let mut accum = vec![0.0_f64; bins];
    let mut segments = 0usize;
    let mut start = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    while start + m <= n {
        let slice = &ts.samples[start..start + m];
        let mean = slice.iter().sum::<f64>() / m as f64;
        for (b, (&x, &w)) in buf.iter_mut().zip(slice.iter().zip(&window)) {
            *b = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (k, acc) in accum.iter_mut().enumerate() {
            let mag = buf[k].norm_sqr();
            // one-sided: double everything except DC and Nyquist
            let fold = if k == 0 || (m % 2 == 0 && k == m / 2) {
                1.0
            } else {
                2.0
            };
            *acc += fold * mag / (fs * window_power);
        }
        segments += 1;
        start += hop;
    }
    debug_assert!(segments > 0);
    let df = fs / m as f64;
    let power: Vec<f64> = accum.iter().map(|&p| p / segments as f64).collect();
    let frequencies: Vec<f64> = (0..bins).map(|k| k as f64 * df).collect();
    Ok(Psd {
        frequencies,
        power,
        df,
    })
}
