//! Bounding-box shape test for human-sized regions and driver selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::DepthFrame;
use crate::growing::{GrownRegion, GrowthParams};
use crate::histogram::SegmentationParams;
use crate::pipeline::segment_frame;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Lower bound on bbox height / width.
    pub min_aspect: f64,
    pub max_aspect: f64,
    /// Region pixels as a fraction of all frame pixels.
    pub min_area_frac: f64,
    pub max_area_frac: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            min_aspect: 1.0,
            max_aspect: 4.0,
            min_area_frac: 0.05,
            max_area_frac: 0.60,
        }
    }
}

impl DetectorConfig {
    /// Accepts every region.
    pub fn permissive() -> Self {
        DetectorConfig {
            min_aspect: f64::MIN_POSITIVE,
            max_aspect: f64::INFINITY,
            min_area_frac: f64::MIN_POSITIVE,
            max_area_frac: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.min_aspect > 0.0
            && self.min_aspect <= self.max_aspect
            && self.min_area_frac > 0.0
            && self.min_area_frac <= self.max_area_frac
            && self.max_area_frac <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("inconsistent detector bounds: {self:?}")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct BodyCandidate {
    pub region: GrownRegion,
    pub aspect: f64,
    pub area_frac: f64,
    pub is_human: bool,
}

pub fn classify_region(region: GrownRegion, cfg: &DetectorConfig, frame_dims: (usize, usize)) -> BodyCandidate {
    let aspect = region.bbox.h as f64 / region.bbox.w as f64;
    let area_frac = region.pixel_count as f64 / (frame_dims.0 * frame_dims.1) as f64;
    let is_human = (cfg.min_aspect..=cfg.max_aspect).contains(&aspect)
        && (cfg.min_area_frac..=cfg.max_area_frac).contains(&area_frac);
    BodyCandidate {
        region,
        aspect,
        area_frac,
        is_human,
    }
}

/// Computes shape features for every region; rejected regions are kept with
/// `is_human == false`.
pub fn classify_regions(
    regions: Vec<GrownRegion>,
    cfg: &DetectorConfig,
    frame_dims: (usize, usize),
) -> Vec<BodyCandidate> {
    regions
        .into_iter()
        .map(|r| classify_region(r, cfg, frame_dims))
        .collect()
}

/// Picks the accepted candidate with the most pixels (earliest on ties).
pub fn select_driver(candidates: &[BodyCandidate]) -> Option<&BodyCandidate> {
    candidates
        .iter()
        .filter(|c| c.is_human)
        .fold(None, |best: Option<&BodyCandidate>, c| match best {
            Some(b) if b.region.pixel_count >= c.region.pixel_count => Some(b),
            _ => Some(c),
        })
}

/// Segments an in-car frame and returns the driver: the largest region that
/// passes the shape test. Its bbox is the tracking window.
pub fn locate_driver(
    frame: &DepthFrame,
    seg: &SegmentationParams,
    growth: &GrowthParams,
    cfg: &DetectorConfig,
) -> Result<BodyCandidate> {
    cfg.validate()?;
    let segmentation = segment_frame(frame, seg, growth)?;
    let regions = segmentation.regions.into_iter().map(|(_, r)| r).collect();
    let candidates = classify_regions(regions, cfg, (frame.width(), frame.height()));
    select_driver(&candidates).cloned().ok_or(Error::NoDriverFound)
}
