//! Depth-change tracking against a reference frame.
//!
//! The first frame of a session fixes the driver window and pixel count
//! `a_r`. Every later frame is differenced against it inside the window,
//! max-pooled onto a coarse grid, split into connected changed areas and
//! summarized as the relative changed size and mean depth of those areas.

mod diff;
mod grid;
mod report;

pub use diff::{gray_level, recalibrate_gray, subtract, DiffImage, GrayImage};
pub use grid::{connected_components, downsample_max, CellGrid, ChangedArea};
pub use report::{
    a_changed, changed_metrics, evaluate_distraction, AlertArea, AlertDecision, AlertEvent, AreaReport,
    DistractionMonitor, MotionReport,
};

use serde::{Deserialize, Serialize};

use crate::detection::BodyCandidate;
use crate::error::{Error, Result};
use crate::frame::{DepthFrame, Rect};
use crate::growing::Connectivity;
use crate::mask::PixelMask;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    /// A valid pixel is changed when `|delta|` exceeds this, mm.
    pub diff_epsilon: u16,
    /// Side of a max-pooling cell, pixels.
    pub grid_cell: usize,
    pub grid_connectivity: Connectivity,
    /// Alert threshold on the total changed area, percent of `a_r`.
    pub area_alert_pct: f64,
    /// Consecutive over-threshold frames needed to alert.
    pub persistence: usize,
    /// `|delta|` at which the gray ramp saturates, mm.
    pub gray_clamp: u16,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            diff_epsilon: 50,
            grid_cell: 10,
            grid_connectivity: Connectivity::Eight,
            area_alert_pct: 10.0,
            persistence: 5,
            gray_clamp: 1000,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.diff_epsilon == 0 || self.grid_cell == 0 || self.persistence == 0 {
            return Err(Error::InvalidConfig(
                "epsilon, grid cell and persistence must be positive".into(),
            ));
        }
        if self.area_alert_pct.is_nan() || self.area_alert_pct <= 0.0 {
            return Err(Error::InvalidConfig("alert percentage must be positive".into()));
        }
        if self.gray_clamp <= self.diff_epsilon {
            return Err(Error::InvalidConfig(format!(
                "gray clamp {} must exceed epsilon {}",
                self.gray_clamp, self.diff_epsilon
            )));
        }
        Ok(())
    }
}

/// The safe-pose frame every later frame is compared with.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFrame {
    /// Driver bbox in full-frame coordinates.
    pub window: Rect,
    pub depth: DepthFrame,
    pub driver_mask: PixelMask,
    pub a_r: usize,
}

pub fn set_reference(frame: &DepthFrame, driver: &BodyCandidate) -> Result<ReferenceFrame> {
    if !driver.is_human {
        return Err(Error::NotHuman);
    }
    let window = driver.region.bbox;
    let depth = frame.crop(window)?;
    let driver_mask = driver.region.mask.crop(window)?;
    let a_r = driver_mask.count();
    if a_r == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(ReferenceFrame {
        window,
        depth,
        driver_mask,
        a_r,
    })
}

/// Everything one monitor step produces.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub diff: DiffImage,
    pub report: MotionReport,
    pub alert: Option<AlertEvent>,
}

/// One monitoring session: a fixed reference plus the rolling alert state.
#[derive(Debug, Clone)]
pub struct MotionTracker {
    reference: ReferenceFrame,
    cfg: TrackerConfig,
    monitor: DistractionMonitor,
}

impl MotionTracker {
    pub fn new(reference: ReferenceFrame, cfg: TrackerConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(MotionTracker {
            reference,
            cfg,
            monitor: DistractionMonitor::new(cfg),
        })
    }

    pub fn reference(&self) -> &ReferenceFrame {
        &self.reference
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.cfg
    }

    /// Subtract, pool, label, measure and update the alert state.
    pub fn step(&mut self, frame_index: usize, current: &DepthFrame) -> Result<StepOutput> {
        let diff = subtract(current, &self.reference, &self.cfg)?;
        let grid = downsample_max(&diff, &self.cfg);
        let areas = connected_components(&grid, &diff, self.cfg.grid_connectivity);
        let mut report = changed_metrics(frame_index, &areas, &self.reference);
        let alert = self.monitor.push(&mut report);
        Ok(StepOutput { diff, report, alert })
    }
}
