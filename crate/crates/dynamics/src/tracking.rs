//! Centroid tracking of frame stacks.
//!
//! Frames travel as 16-bit PGM (P5) files next to a `meta` key=value
//! file holding `frame_rate_hz` and `pixel_size_m`. Tracking subtracts
//! a per-frame background percentile, clamps at zero and takes the
//! intensity-weighted centroid.

use crate::timeseries::TimeSeries;
use crate::DynamicsError;

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

/// A stack of equally sized intensity frames.
#[derive(Clone, Debug)]
pub struct FrameStack {
    /// Row-major, `height` rows of `width` pixels each.
    pub frames: Vec<Vec<u16>>,
    pub width: usize,
    pub height: usize,
    /// Hz.
    pub frame_rate: f64,
    /// m per pixel.
    pub pixel_size: f64,
}

/// Rectangular region of interest in pixel coordinates.
#[derive(Clone, Copy, Debug)]
pub struct Roi {
    pub x0: usize,
    pub y0: usize,
    pub width: usize,
    pub height: usize,
}

impl FrameStack {
    pub fn new(
        frames: Vec<Vec<u16>>,
        width: usize,
        height: usize,
        frame_rate: f64,
        pixel_size: f64,
    ) -> Result<Self, DynamicsError> {
        if frame_rate <= 0.0 || pixel_size <= 0.0 {
            return Err(DynamicsError::Format(
                "frame rate and pixel size must be positive".into(),
            ));
        }
        if frames.is_empty() || frames.iter().any(|f| f.len() != width * height) {
            return Err(DynamicsError::Format(
                "all frames must be width x height".into(),
            ));
        }
        Ok(Self {
            frames,
            width,
            height,
            frame_rate,
            pixel_size,
        })
    }

    pub fn full_roi(&self) -> Roi {
        Roi {
            x0: 0,
            y0: 0,
            width: self.width,
            height: self.height,
        }
    }

    /// Write as `frame_NNNNN.pgm` files plus a `meta` file.
    pub fn write_dir(&self, dir: &Path) -> Result<(), DynamicsError> {
        fs::create_dir_all(dir)?;
        for (k, frame) in self.frames.iter().enumerate() {
            let mut buf = Vec::with_capacity(frame.len() * 2 + 32);
            write!(buf, "P5\n{} {}\n65535\n", self.width, self.height)?;
            for &v in frame {
                buf.extend_from_slice(&v.to_be_bytes());
            }
            fs::write(dir.join(format!("frame_{k:05}.pgm")), buf)?;
        }
        let meta = format!(
            "frame_rate_hz={}\npixel_size_m={}\n",
            self.frame_rate, self.pixel_size
        );
        fs::write(dir.join("meta"), meta)?;
        Ok(())
    }

    /// Read a directory written by [`FrameStack::write_dir`]: all
    /// `.pgm` files in filename order plus the `meta` file.
    pub fn read_dir(dir: &Path) -> Result<Self, DynamicsError> {
        let meta_text = fs::read_to_string(dir.join("meta"))
            .map_err(|e| DynamicsError::Format(format!("missing meta file: {e}")))?;
        let mut frame_rate = None;
        let mut pixel_size = None;
        for line in meta_text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(DynamicsError::Format(format!("bad meta line: {line}")));
            };
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| DynamicsError::Format(format!("bad meta value: {e}")))?;
            match key.trim() {
                "frame_rate_hz" => frame_rate = Some(value),
                "pixel_size_m" => pixel_size = Some(value),
                other => {
                    return Err(DynamicsError::Format(format!("unknown meta key: {other}")))
                }
            }
        }
        let (Some(frame_rate), Some(pixel_size)) = (frame_rate, pixel_size) else {
            return Err(DynamicsError::Format(
                "meta must define frame_rate_hz and pixel_size_m".into(),
            ));
        };

        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "pgm"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(DynamicsError::Format("no .pgm frames found".into()));
        }
        let mut frames = Vec::with_capacity(paths.len());
        let mut dims = None;
        for path in paths {
            let (w, h, data) = read_pgm(&path)?;
            match dims {
                None => dims = Some((w, h)),
                Some(d) if d != (w, h) => {
                    return Err(DynamicsError::Format(format!(
                        "frame {} is {w}x{h}, expected {}x{}",
                        path.display(),
                        d.0,
                        d.1
                    )))
                }
                _ => {}
            }
            frames.push(data);
        }
        let (width, height) = dims.expect("at least one frame");
        Self::new(frames, width, height, frame_rate, pixel_size)
    }
}

fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<u16>), DynamicsError> {
    let mut raw = Vec::new();
    fs::File::open(path)?.read_to_end(&mut raw)?;
    // header: magic, width, height, maxval, single whitespace, then data
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 && pos < raw.len() {
        while pos < raw.len() && raw[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < raw.len() && raw[pos] == b'#' {
            while pos < raw.len() && raw[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < raw.len() && !raw[pos].is_ascii_whitespace() {
            pos += 1;
        }
        fields.push(String::from_utf8_lossy(&raw[start..pos]).into_owned());
    }
    pos += 1; // the single whitespace after maxval
    if fields.len() != 4 || fields[0] != "P5" {
        return Err(DynamicsError::Format(format!(
            "{} is not a binary PGM",
            path.display()
        )));
    }
    let width: usize = fields[1]
        .parse()
        .map_err(|_| DynamicsError::Format("bad width".into()))?;
    let height: usize = fields[2]
        .parse()
        .map_err(|_| DynamicsError::Format("bad height".into()))?;
    let maxval: usize = fields[3]
        .parse()
        .map_err(|_| DynamicsError::Format("bad maxval".into()))?;
    if maxval != 65535 {
        return Err(DynamicsError::Format(
            "only 16-bit (maxval 65535) PGM frames are supported".into(),
        ));
    }
    let need = width * height * 2;
    if raw.len() < pos + need {
        return Err(DynamicsError::Format(format!(
            "{}: truncated pixel data",
            path.display()
        )));
    }
    let data = raw[pos..pos + need]
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok((width, height, data))
}

/// Track the intensity-weighted centroid through every frame.
///
/// Per frame: take the ROI, subtract the given background percentile
/// (clamping at zero) and reduce to the centroid. Returns the (x, y)
/// trajectories in metres via the stack's pixel size; pixel coordinates
/// refer to pixel centres.
pub fn track_centroid(
    stack: &FrameStack,
    roi: Roi,
    background_percentile: f64,
) -> Result<(TimeSeries, TimeSeries), DynamicsError> {
    assert!((0.0..=100.0).contains(&background_percentile));
    if roi.x0 + roi.width > stack.width || roi.y0 + roi.height > stack.height {
        return Err(DynamicsError::Format("ROI exceeds the frame".into()));
    }
    let mut xs = Vec::with_capacity(stack.frames.len());
    let mut ys = Vec::with_capacity(stack.frames.len());
    let mut scratch: Vec<u16> = Vec::with_capacity(roi.width * roi.height);
    for frame in &stack.frames {
        scratch.clear();
        for row in 0..roi.height {
            let offset = (roi.y0 + row) * stack.width + roi.x0;
            scratch.extend_from_slice(&frame[offset..offset + roi.width]);
        }
        let background = percentile(&mut scratch.clone(), background_percentile);
        let mut total = 0.0_f64;
        let mut mx = 0.0_f64;
        let mut my = 0.0_f64;
        for row in 0..roi.height {
            for col in 0..roi.width {
                let v = scratch[row * roi.width + col];
                let w = (v as f64 - background).max(0.0);
                total += w;
                mx += w * (roi.x0 + col) as f64;
                my += w * (roi.y0 + row) as f64;
            }
        }
        if total <= 0.0 {
            return Err(DynamicsError::EmptyRoi);
        }
        xs.push(mx / total * stack.pixel_size);
        ys.push(my / total * stack.pixel_size);
    }
    let dt = 1.0 / stack.frame_rate;
    Ok((TimeSeries::new(0.0, dt, xs)?, TimeSeries::new(0.0, dt, ys)?))
}

fn percentile(values: &mut [u16], p: f64) -> f64 {
    values.sort_unstable();
    let idx = ((values.len() - 1) as f64 * p / 100.0).round() as usize;
    values[idx] as f64
}
