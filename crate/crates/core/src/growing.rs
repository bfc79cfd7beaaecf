//! Adaptive region growing inside a region of interest.
//!
//! Seeds come from the row and column marginals of the ROI mask. Each seed
//! grows with its own threshold: the larger of the two gaps between the
//! seed's histogram bin and its neighboring bins. A neighbor joins the region
//! when its depth is within that threshold of the already accepted pixel it
//! touches.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{DepthFrame, Rect};
use crate::histogram::DepthHistogram;
use crate::mask::PixelMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl TryFrom<u8> for Connectivity {
    type Error = String;

    fn try_from(n: u8) -> std::result::Result<Self, String> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(format!("connectivity must be 4 or 8, got {n}")),
        }
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        match c {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

// N, E, S, W, then the diagonals clockwise from NE.
const OFFSETS: [(isize, isize); 8] = [(0, -1), (1, 0), (0, 1), (-1, 0), (1, -1), (1, 1), (-1, 1), (-1, -1)];

impl Connectivity {
    pub fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &OFFSETS[..4],
            Connectivity::Eight => &OFFSETS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub x: usize,
    pub y: usize,
    pub depth: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub connectivity: Connectivity,
    pub min_region_pixels: usize,
    pub max_seeds: usize,
}

impl Default for GrowthParams {
    fn default() -> Self {
        GrowthParams {
            connectivity: Connectivity::Four,
            min_region_pixels: 200,
            max_seeds: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrownRegion {
    pub mask: PixelMask,
    pub bbox: Rect,
    pub pixel_count: usize,
    pub mean_depth: f64,
    pub seed: Seed,
    /// Growth threshold in mm.
    pub threshold_used: u16,
}

/// Picks the seed at the intersection of the densest mask row and column
/// (smallest index on ties). When that point is outside the mask the closest
/// mask pixel by L1 distance is used, ties resolved by smallest `(y, x)`.
pub fn find_seed(mask: &PixelMask, frame: &DepthFrame) -> Result<Seed> {
    let mut row_counts = vec![0usize; mask.height()];
    let mut col_counts = vec![0usize; mask.width()];
    for (x, y) in mask.iter_set() {
        row_counts[y] += 1;
        col_counts[x] += 1;
    }
    let argmax = |counts: &[usize]| {
        counts
            .iter()
            .enumerate()
            .fold((0, 0), |best, (i, &c)| if c > best.1 { (i, c) } else { best })
    };
    let (row, row_count) = argmax(&row_counts);
    if row_count == 0 {
        return Err(Error::EmptyMask);
    }
    let (col, _) = argmax(&col_counts);

    let (x, y) = if mask.get(col, row) {
        (col, row)
    } else {
        // raster order visits smaller (y, x) first, so strict < keeps the tie rule
        let mut best = (usize::MAX, 0, 0);
        for (x, y) in mask.iter_set() {
            let d = x.abs_diff(col) + y.abs_diff(row);
            if d < best.0 {
                best = (d, x, y);
            }
        }
        (best.1, best.2)
    };
    Ok(Seed {
        x,
        y,
        depth: frame.get(x, y),
    })
}

/// Growth threshold for a seed: the larger gap between the seed's bin and
/// its adjacent bins, one-sided at the histogram ends, never below 1 mm.
pub fn adaptive_threshold(hist: &DepthHistogram, seed_depth: u16) -> Result<u16> {
    let i = hist
        .index_of(seed_depth)
        .ok_or(Error::DepthNotInHistogram(seed_depth))?;
    let x = hist.values();
    let above = x.get(i + 1).map_or(0, |&next| next - x[i]);
    let below = if i > 0 { x[i] - x[i - 1] } else { 0 };
    Ok(above.max(below).max(1))
}

#[inline]
pub fn similarity(a: u16, b: u16) -> u16 {
    a.abs_diff(b)
}

/// Breadth-first flood fill from `seed` over `roi`. A neighbor `q` of an
/// accepted pixel `p` is accepted when `similarity(p, q) <= t_h`. Rejected
/// neighbors stay eligible through other accepted pixels, so the result is
/// the connected component of the seed under that edge rule.
pub fn grow_region(
    frame: &DepthFrame,
    roi: &PixelMask,
    seed: Seed,
    t_h: u16,
    params: &GrowthParams,
) -> Result<GrownRegion> {
    let (w, h) = (frame.width(), frame.height());
    assert_eq!((roi.width(), roi.height()), (w, h), "roi does not match frame");
    if seed.x >= w || seed.y >= h || !roi.get(seed.x, seed.y) {
        return Err(Error::SeedOutsideRoi { x: seed.x, y: seed.y });
    }

    let depth = frame.data();
    let mut accepted = PixelMask::new(w, h);
    let mut queue = VecDeque::new();
    let start = seed.y * w + seed.x;
    accepted.set_index(start, true);
    queue.push_back(start);

    let mut count = 0usize;
    let mut depth_sum = 0u64;
    let (mut x0, mut y0, mut x1, mut y1) = (seed.x, seed.y, seed.x, seed.y);

    while let Some(p) = queue.pop_front() {
        let (px, py) = (p % w, p / w);
        count += 1;
        depth_sum += depth[p] as u64;
        x0 = x0.min(px);
        x1 = x1.max(px);
        y0 = y0.min(py);
        y1 = y1.max(py);

        for &(dx, dy) in params.connectivity.offsets() {
            let (Some(qx), Some(qy)) = (px.checked_add_signed(dx), py.checked_add_signed(dy)) else {
                continue;
            };
            if qx >= w || qy >= h {
                continue;
            }
            let q = qy * w + qx;
            if accepted.get_index(q) || !roi.get_index(q) {
                continue;
            }
            if similarity(depth[p], depth[q]) <= t_h {
                accepted.set_index(q, true);
                queue.push_back(q);
            }
        }
    }

    Ok(GrownRegion {
        mask: accepted,
        bbox: Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1),
        pixel_count: count,
        mean_depth: depth_sum as f64 / count as f64,
        seed,
        threshold_used: t_h,
    })
}

/// Repeatedly seeds and grows inside the residual ROI, removing each grown
/// region from the residual, until fewer than `min_region_pixels` remain or
/// `max_seeds` seeds have been used. Regions smaller than
/// `min_region_pixels` are dropped; the rest are returned in extraction
/// order.
///
/// `hist` should be the histogram of the ROI's pixels; seed thresholds are
/// read from it.
pub fn segment_objects(
    frame: &DepthFrame,
    roi: &PixelMask,
    hist: &DepthHistogram,
    params: &GrowthParams,
) -> Result<Vec<GrownRegion>> {
    let mut residual = roi.clone();
    let mut remaining = residual.count();
    let mut regions = Vec::new();
    let mut seeds_used = 0;

    while remaining > 0 && remaining >= params.min_region_pixels && seeds_used < params.max_seeds {
        let seed = find_seed(&residual, frame)?;
        let t_h = adaptive_threshold(hist, seed.depth)?;
        let region = grow_region(frame, &residual, seed, t_h, params)?;
        seeds_used += 1;
        residual.subtract(&region.mask);
        remaining -= region.pixel_count;
        if region.pixel_count >= params.min_region_pixels {
            regions.push(region);
        }
    }
    Ok(regions)
}
