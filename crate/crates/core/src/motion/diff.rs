use crate::error::Result;
use crate::frame::DepthFrame;

use super::{ReferenceFrame, TrackerConfig};

/// Signed per-pixel depth change of the current frame against the
/// reference, over the tracking window.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffImage {
    pub width: usize,
    pub height: usize,
    /// current - reference, mm
    pub delta: Vec<i32>,
    /// both operands carry a measurement
    pub valid: Vec<bool>,
    /// current frame depth over the window
    pub current: Vec<u16>,
    pub epsilon: u16,
}

impl DiffImage {
    #[inline]
    pub fn is_changed(&self, i: usize) -> bool {
        self.valid[i] && self.delta[i].unsigned_abs() > self.epsilon as u32
    }

    pub fn changed_count(&self) -> usize {
        (0..self.delta.len()).filter(|&i| self.is_changed(i)).count()
    }
}

/// Differences `current` against the reference inside the reference window.
pub fn subtract(current: &DepthFrame, reference: &ReferenceFrame, cfg: &TrackerConfig) -> Result<DiffImage> {
    let window = current.crop(reference.window)?;
    let n = window.len();
    let mut delta = Vec::with_capacity(n);
    let mut valid = Vec::with_capacity(n);
    for (&c, &r) in window.data().iter().zip(reference.depth.data()) {
        delta.push(c as i32 - r as i32);
        valid.push(c > 0 && r > 0);
    }
    Ok(DiffImage {
        width: window.width(),
        height: window.height(),
        delta,
        valid,
        current: window.into_data(),
        epsilon: cfg.diff_epsilon,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

// round(num / den) for non-negative operands, halves rounded up
fn round_div(num: u32, den: u32) -> u32 {
    (2 * num + den) / (2 * den)
}

/// Maps a difference magnitude to 8-bit gray: unchanged pixels land in
/// 0..=100 and changed pixels in 150..=255, leaving 101..=149 unused.
pub fn gray_level(delta: i32, valid: bool, cfg: &TrackerConfig) -> u8 {
    if !valid {
        return 0;
    }
    let eps = cfg.diff_epsilon as u32;
    let clamp = cfg.gray_clamp as u32;
    let m = delta.unsigned_abs();
    if m <= eps {
        round_div(100 * m, eps) as u8
    } else {
        let span = clamp - eps;
        let over = (m - eps).min(span);
        (150 + round_div(105 * over, span)) as u8
    }
}

pub fn recalibrate_gray(diff: &DiffImage, cfg: &TrackerConfig) -> GrayImage {
    let pixels = diff
        .delta
        .iter()
        .zip(&diff.valid)
        .map(|(&d, &v)| gray_level(d, v, cfg))
        .collect();
    GrayImage {
        width: diff.width,
        height: diff.height,
        pixels,
    }
}
