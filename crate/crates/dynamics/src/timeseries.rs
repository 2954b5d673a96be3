//! Uniformly sampled time series with CSV I/O.

use crate::DynamicsError;
use fluxtrap_numerics::format_exp9;
use std::io::{BufRead, Write};

pub const TIMESERIES_SCHEMA: &str = "t_s,x_m";

/// Minimum series length accepted anywhere in this crate.
pub const MIN_SAMPLES: usize = 16;

/// A uniformly sampled displacement record.
#[derive(Clone, Debug)]
pub struct TimeSeries {
    /// s, time of the first sample.
    pub start_time: f64,
    /// s, sample spacing.
    pub dt: f64,
    /// m (or px for raw tracked data).
    pub samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start_time: f64, dt: f64, samples: Vec<f64>) -> Result<Self, DynamicsError> {
        if samples.len() < MIN_SAMPLES {
            return Err(DynamicsError::TooShort {
                len: samples.len(),
                need: MIN_SAMPLES,
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DynamicsError::Format("sample spacing must be positive".into()));
        }
        Ok(Self {
            start_time,
            dt,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.start_time + index as f64 * self.dt
    }

    pub fn duration(&self) -> f64 {
        (self.len().saturating_sub(1)) as f64 * self.dt
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.samples.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / self.len() as f64
    }

    /// The tail of the series starting at `index`, with its time base.
    pub fn slice_from(&self, index: usize) -> Result<TimeSeries, DynamicsError> {
        TimeSeries::new(self.time_at(index), self.dt, self.samples[index..].to_vec())
    }

    /// CSV with the `t_s,x_m` schema and exponential formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# schema={TIMESERIES_SCHEMA}")?;
        writeln!(w, "{TIMESERIES_SCHEMA}")?;
        for (i, &x) in self.samples.iter().enumerate() {
            writeln!(
                w,
                "{},{}",
                format_exp9(self.time_at(i)),
                format_exp9(x)
            )?;
        }
        Ok(())
    }

    /// Parse the `t_s,x_m` schema; `#` comments and the header line are
    /// skipped, and the time column must be uniform to 1e-9 relative.
    pub fn read_csv<R: BufRead>(r: R) -> Result<TimeSeries, DynamicsError> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for line in r.lines() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("t_s") {
                continue;
            }
            let mut cols = trimmed.split(',');
            let (Some(t), Some(x)) = (cols.next(), cols.next()) else {
                return Err(DynamicsError::Format(format!("bad row: {trimmed}")));
            };
            times.push(
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| DynamicsError::Format(format!("bad time '{t}': {e}")))?,
            );
            values.push(
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| DynamicsError::Format(format!("bad value '{x}': {e}")))?,
            );
        }
        if times.len() < MIN_SAMPLES {
            return Err(DynamicsError::TooShort {
                len: times.len(),
                need: MIN_SAMPLES,
            });
        }
        let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        if dt <= 0.0 {
            return Err(DynamicsError::Format("time column must ascend".into()));
        }
        for (i, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            // 1e-9 relative on the step itself, plus the text quantisation
            // of two ten-significant-digit timestamps
            let tolerance = 1e-9 * dt + 2e-9 * w[0].abs().max(w[1].abs()) + 1e-15;
            if (step - dt).abs() > tolerance {
                return Err(DynamicsError::Format(format!(
                    "non-uniform sampling at row {}: step {step}, expected {dt}",
                    i + 1
                )));
            }
        }
        TimeSeries::new(times[0], dt, values)
    }
}
