//! Depth-image segmentation by histogram of depth and adaptive region
//! growing, with depth-change tracking for driver distraction monitoring.
//!
//! Frames are single-channel depth images in millimeters where 0 marks an
//! invalid measurement. The single-frame pipeline is:
//!
//! 1. [`build_histogram`] over the valid pixels,
//! 2. [`detect_intervals`]: peak detection, recursive splitting on the body
//!    span `T`, widening and valley snapping,
//! 3. [`extract_roi`] per interval,
//! 4. [`segment_objects`]: seeded region growing with a per-seed threshold
//!    taken from the histogram,
//! 5. [`classify_regions`] / [`locate_driver`] by bounding-box shape.
//!
//! [`MotionTracker`] then compares later frames with the driver window of a
//! reference frame and raises distraction alerts.

pub mod detection;
pub mod error;
pub mod frame;
pub mod growing;
pub mod histogram;
pub mod mask;
pub mod motion;
pub mod pgm;
pub mod pipeline;
pub mod synth;

pub use detection::{classify_region, classify_regions, locate_driver, select_driver, BodyCandidate, DetectorConfig};
pub use error::{Error, Result};
pub use frame::{DepthFrame, Rect};
pub use growing::{
    adaptive_threshold, find_seed, grow_region, segment_objects, similarity, Connectivity, GrownRegion, GrowthParams,
    Seed,
};
pub use histogram::{
    build_histogram, detect_intervals, detect_peaks, extract_roi, split_regions, widen_and_snap, DepthHistogram,
    DepthInterval, IndexRange, PeakSet, SegmentationParams,
};
pub use mask::PixelMask;
pub use motion::{set_reference, MotionReport, MotionTracker, ReferenceFrame, TrackerConfig};
pub use pgm::{load_depth_frame, save_depth_frame};
pub use pipeline::{segment_frame, Segmentation};
