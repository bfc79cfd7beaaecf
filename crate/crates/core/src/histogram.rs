//! Histogram-of-depth region detection.
//!
//! The histogram is sparse: one bin per distinct nonzero millimeter value.
//! Regions are found by detecting strict local peaks, recursively cutting the
//! histogram wherever two consecutive peaks lie more than one body span `T`
//! apart, and finally widening each region by `T/2` on both sides before
//! snapping each boundary back to the lowest-count bin inside the margin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::DepthFrame;
use crate::mask::PixelMask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthHistogram {
    values: Vec<u16>,
    counts: Vec<u32>,
}

impl DepthHistogram {
    /// Builds a histogram from parallel arrays. Values must be strictly
    /// ascending and nonzero, counts positive.
    pub fn from_parts(values: Vec<u16>, counts: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyHistogram);
        }
        if values.len() != counts.len() {
            return Err(Error::InvalidSpec("histogram arrays differ in length".into()));
        }
        if values[0] == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "histogram values must be nonzero and strictly ascending".into(),
            ));
        }
        if counts.contains(&0) {
            return Err(Error::InvalidSpec("histogram counts must be positive".into()));
        }
        Ok(DepthHistogram { values, counts })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct depth values, ascending (mm).
    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn index_of(&self, depth: u16) -> Option<usize> {
        self.values.binary_search(&depth).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u16, u32)> + '_ {
        self.values.iter().copied().zip(self.counts.iter().copied())
    }

    /// Bins whose depth lies in `interval`; this is the histogram of the
    /// pixels that `extract_roi` selects for the same interval.
    pub fn restrict(&self, interval: DepthInterval) -> Option<DepthHistogram> {
        let start = self.values.partition_point(|&v| v < interval.lo);
        let end = self.values.partition_point(|&v| v <= interval.hi);
        (start < end).then(|| DepthHistogram {
            values: self.values[start..end].to_vec(),
            counts: self.counts[start..end].to_vec(),
        })
    }

    /// Sum of counts over the inclusive index range.
    pub fn range_total(&self, range: IndexRange) -> u64 {
        self.counts[range.start..=range.end].iter().map(|&c| c as u64).sum()
    }
}

/// Histogram of the nonzero pixels of `frame`.
pub fn build_histogram(frame: &DepthFrame) -> Result<DepthHistogram> {
    let mut dense = vec![0u32; 1 << 16];
    for &d in frame.data() {
        dense[d as usize] += 1;
    }
    let (values, counts): (Vec<u16>, Vec<u32>) = dense
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| (d as u16, c))
        .unzip();
    if values.is_empty() {
        return Err(Error::EmptyHistogram);
    }
    Ok(DepthHistogram { values, counts })
}

/// Indices into a histogram that satisfy the strict two-sided peak test.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeakSet {
    pub indices: Vec<usize>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Peaks of the counts restricted to `lo_idx..=hi_idx`. The endpoints of the
/// sub-range never qualify because they lack a neighbor inside it.
pub fn detect_peaks(hist: &DepthHistogram, lo_idx: usize, hi_idx: usize) -> PeakSet {
    assert!(
        lo_idx <= hi_idx && hi_idx < hist.len(),
        "peak range {lo_idx}..={hi_idx} outside histogram of {} bins",
        hist.len()
    );
    let y = &hist.counts;
    let indices = (lo_idx + 1..hi_idx)
        .filter(|&i| y[i] > y[i - 1] && y[i] > y[i + 1])
        .collect();
    PeakSet { indices }
}

/// Inclusive range of histogram indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        IndexRange { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.start && i <= self.end
    }
}

/// Inclusive depth band in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInterval {
    pub lo: u16,
    pub hi: u16,
}

impl DepthInterval {
    pub fn new(lo: u16, hi: u16) -> Self {
        assert!(lo <= hi, "interval bounds reversed: {lo} > {hi}");
        DepthInterval { lo, hi }
    }

    pub fn contains(&self, depth: u16) -> bool {
        depth >= self.lo && depth <= self.hi
    }

    pub fn overlaps(&self, other: &DepthInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationParams {
    /// Depth extent of a human body, mm.
    pub body_span_t: u16,
    /// Intervals selecting fewer pixels than this are dropped.
    pub min_region_pixels: usize,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        SegmentationParams {
            body_span_t: 400,
            min_region_pixels: 200,
        }
    }
}

impl SegmentationParams {
    pub fn validate(&self) -> Result<()> {
        if self.body_span_t == 0 {
            return Err(Error::InvalidConfig("body span T must be positive".into()));
        }
        Ok(())
    }
}

/// Recursively splits the histogram into depth regions.
///
/// A working range is left whole when fewer than two peaks survive in it or
/// its first and last peaks are less than `T` apart. Otherwise the first pair
/// of consecutive peaks further than `T` apart is separated at the
/// lowest-count bin strictly between them (leftmost on ties) and both parts
/// are processed again with peaks recomputed inside each part.
///
/// The returned ranges are disjoint, ascending and cover every bin.
pub fn split_regions(hist: &DepthHistogram, params: &SegmentationParams) -> Vec<IndexRange> {
    let t = params.body_span_t;
    let x = &hist.values;
    let mut regions = Vec::new();
    let mut work = vec![IndexRange::new(0, hist.len() - 1)];

    while let Some(range) = work.pop() {
        let peaks = detect_peaks(hist, range.start, range.end).indices;
        let cut = match (peaks.first(), peaks.last()) {
            (Some(&first), Some(&last)) if peaks.len() >= 2 && x[last] - x[first] >= t => peaks
                .windows(2)
                .find(|p| x[p[1]] - x[p[0]] > t)
                .map(|p| valley_between(hist, p[0], p[1])),
            _ => None,
        };
        match cut {
            Some(c) => {
                // left part is popped first so output stays in ascending order
                work.push(IndexRange::new(c + 1, range.end));
                work.push(IndexRange::new(range.start, c));
            }
            None => regions.push(range),
        }
    }
    regions
}

/// Last index of the left part when splitting between peaks `a` and `b`.
/// The cut is at the lowest-count bin strictly between them (leftmost on
/// ties); that bin stays with whichever neighbor is closer in depth, the
/// left one on equal gaps.
fn valley_between(hist: &DepthHistogram, a: usize, b: usize) -> usize {
    let mut valley = a + 1;
    for i in a + 2..b {
        if hist.counts[i] < hist.counts[valley] {
            valley = i;
        }
    }
    let x = &hist.values;
    if x[valley + 1] - x[valley] < x[valley] - x[valley - 1] {
        valley - 1
    } else {
        valley
    }
}

/// Widens the region by `T/2` mm on each side, clamped to the histogram,
/// then moves each boundary to the lowest-count bin inside its margin. Ties
/// go to the bin closest to the original boundary.
pub fn widen_and_snap(hist: &DepthHistogram, region: IndexRange, params: &SegmentationParams) -> DepthInterval {
    let half = params.body_span_t / 2;
    let x = &hist.values;
    let y = &hist.counts;

    let lo_limit = x[region.start].saturating_sub(half);
    let mut lo = region.start;
    let mut j = region.start;
    while j > 0 && x[j - 1] >= lo_limit {
        j -= 1;
        if y[j] < y[lo] {
            lo = j;
        }
    }

    let hi_limit = x[region.end].saturating_add(half);
    let mut hi = region.end;
    let mut j = region.end;
    while j + 1 < x.len() && x[j + 1] <= hi_limit {
        j += 1;
        if y[j] < y[hi] {
            hi = j;
        }
    }

    DepthInterval::new(x[lo], x[hi])
}

/// Split, widen and snap, dropping intervals that select fewer than
/// `min_region_pixels` pixels.
pub fn detect_intervals(hist: &DepthHistogram, params: &SegmentationParams) -> Vec<DepthInterval> {
    split_regions(hist, params)
        .into_iter()
        .map(|r| widen_and_snap(hist, r, params))
        .filter(|iv| {
            hist.restrict(*iv)
                .is_some_and(|h| h.total() >= params.min_region_pixels as u64)
        })
        .collect()
}

/// Pixels whose depth falls in `interval`. Invalid (zero) pixels never do.
pub fn extract_roi(frame: &DepthFrame, interval: DepthInterval) -> PixelMask {
    let bits = frame.data().iter().map(|&d| d > 0 && interval.contains(d)).collect();
    PixelMask::from_bits(frame.width(), frame.height(), bits).expect("frame-sized mask")
}
