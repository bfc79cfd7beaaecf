use crate::error::Result;
use crate::frame::DepthFrame;
use crate::growing::{segment_objects, GrownRegion, GrowthParams};
use crate::histogram::{
    build_histogram, detect_intervals, extract_roi, DepthHistogram, DepthInterval, SegmentationParams,
};

/// Output of the full single-frame segmentation.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub histogram: DepthHistogram,
    pub intervals: Vec<DepthInterval>,
    /// Grown regions paired with the index of the interval they came from.
    pub regions: Vec<(usize, GrownRegion)>,
}

/// Histogram, interval detection, ROI extraction and adaptive region
/// growing inside every ROI.
pub fn segment_frame(frame: &DepthFrame, seg: &SegmentationParams, growth: &GrowthParams) -> Result<Segmentation> {
    seg.validate()?;
    let histogram = build_histogram(frame)?;
    let intervals = detect_intervals(&histogram, seg);
    let mut regions = Vec::new();
    for (i, &interval) in intervals.iter().enumerate() {
        let roi = extract_roi(frame, interval);
        let Some(roi_hist) = histogram.restrict(interval) else {
            continue;
        };
        for region in segment_objects(frame, &roi, &roi_hist, growth)? {
            regions.push((i, region));
        }
    }
    Ok(Segmentation {
        histogram,
        intervals,
        regions,
    })
}
