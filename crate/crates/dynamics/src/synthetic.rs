//! Synthetic frame rendering for tracking fixtures and end-to-end runs.

use crate::tracking::FrameStack;

/// Render a Gaussian spot at the given per-frame pixel positions.
///
/// Pixel (col, row) carries `baseline + amplitude *
/// exp(-((col-x)^2 + (row-y)^2) / (2 sigma^2))`, quantised to u16;
/// coordinates refer to pixel centres, matching the tracker.
#[allow(clippy::too_many_arguments)]
pub fn render_spot_stack(
    xs_px: &[f64],
    ys_px: &[f64],
    width: usize,
    height: usize,
    sigma_px: f64,
    amplitude: f64,
    baseline: f64,
    frame_rate: f64,
    pixel_size: f64,
) -> FrameStack {
    assert_eq!(xs_px.len(), ys_px.len());
    assert!(sigma_px > 0.0 && amplitude >= 0.0 && baseline >= 0.0);
    let frames: Vec<Vec<u16>> = xs_px
        .iter()
        .zip(ys_px)
        .map(|(&cx, &cy)| {
            let mut frame = Vec::with_capacity(width * height);
            for row in 0..height {
                for col in 0..width {
                    let dx = col as f64 - cx;
                    let dy = row as f64 - cy;
                    let v = baseline
                        + amplitude * (-(dx * dx + dy * dy) / (2.0 * sigma_px * sigma_px)).exp();
                    frame.push(v.round().clamp(0.0, 65535.0) as u16);
                }
            }
            frame
        })
        .collect();
    FrameStack::new(frames, width, height, frame_rate, pixel_size)
        .expect("rendered frames are consistent by construction")
}
