use std::path::Path;

use depthseg::motion::{AlertEvent, MotionReport};
use depthseg::{BodyCandidate, DepthHistogram, DepthInterval, GrownRegion, Rect, Seed};
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::CliError;

pub const REPORT_FILE: &str = "report.json";

/// Top-level document written by every subcommand. Everything except
/// `timings` is a pure function of the inputs and `config`.
#[derive(Debug, Serialize)]
pub struct RunReport<T> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub config: PipelineConfig,
    pub results: T,
    pub timings: Timings,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(
        command: &'static str,
        inputs: Vec<String>,
        config: PipelineConfig,
        results: T,
        timings: Timings,
    ) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            config,
            results,
            timings,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        crate::commands::write_file(&dir.join(REPORT_FILE), self.to_json()?.as_bytes())
    }
}

/// Wall-clock measurements, milliseconds.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    /// One entry per input file or monitored frame.
    pub per_item_ms: Vec<f64>,
    pub median_ms: f64,
}

impl Timings {
    pub fn from_items(total_ms: f64, per_item_ms: Vec<f64>) -> Self {
        let median_ms = median(&per_item_ms);
        Timings {
            total_ms,
            per_item_ms,
            median_ms,
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramSummary {
    pub distinct_values: usize,
    pub valid_pixels: u64,
    pub min_depth: u16,
    pub max_depth: u16,
}

impl From<&DepthHistogram> for HistogramSummary {
    fn from(h: &DepthHistogram) -> Self {
        HistogramSummary {
            distinct_values: h.len(),
            valid_pixels: h.total(),
            min_depth: h.values()[0],
            max_depth: h.values()[h.len() - 1],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub lo: u16,
    pub hi: u16,
    pub pixels: u64,
}

impl IntervalReport {
    pub fn new(iv: DepthInterval, hist: &DepthHistogram) -> Self {
        IntervalReport {
            lo: iv.lo,
            hi: iv.hi,
            pixels: hist.restrict(iv).map_or(0, |h| h.total()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    /// Index into `intervals`.
    pub interval: usize,
    pub bbox: Rect,
    pub pixel_count: usize,
    pub mean_depth: f64,
    pub seed: Seed,
    pub threshold_used: u16,
    /// Mask file relative to the output directory.
    pub mask: String,
}

impl RegionReport {
    pub fn new(interval: usize, r: &GrownRegion, mask: String) -> Self {
        RegionReport {
            interval,
            bbox: r.bbox,
            pixel_count: r.pixel_count,
            mean_depth: r.mean_depth,
            seed: r.seed,
            threshold_used: r.threshold_used,
            mask,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentResult {
    pub input: String,
    pub width: usize,
    pub height: usize,
    pub histogram: HistogramSummary,
    pub histogram_csv: String,
    pub intervals: Vec<IntervalReport>,
    pub regions: Vec<RegionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub bbox: Rect,
    pub pixel_count: usize,
    pub mean_depth: f64,
    pub aspect: f64,
    pub area_frac: f64,
    pub is_human: bool,
}

impl From<&BodyCandidate> for CandidateReport {
    fn from(c: &BodyCandidate) -> Self {
        CandidateReport {
            bbox: c.region.bbox,
            pixel_count: c.region.pixel_count,
            mean_depth: c.region.mean_depth,
            aspect: c.aspect,
            area_frac: c.area_frac,
            is_human: c.is_human,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DriverStatus {
    Found,
    NoDriverFound,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriverResult {
    pub input: String,
    pub status: DriverStatus,
    pub candidates: Vec<CandidateReport>,
    /// Index into `candidates`.
    pub driver: Option<usize>,
    pub driver_bbox: Option<Rect>,
    pub masks: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonitorResult {
    pub frame_count: usize,
    pub reference: String,
    pub driver: CandidateReport,
    pub window: Rect,
    pub a_r: usize,
    pub reports: Vec<MotionReport>,
    pub alerts: Vec<AlertEvent>,
}

/// One NDJSON line of `monitor` output.
#[derive(Debug, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StreamLine<'a> {
    Motion(&'a MotionReport),
    Alert(&'a AlertEvent),
}

#[derive(Debug, Clone, Serialize)]
pub struct BlobTruth {
    pub pixels: usize,
    pub bbox: Option<Rect>,
    pub mask: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneTruth {
    pub blobs: Vec<BlobTruth>,
    pub floor_pixels: usize,
    pub floor_mask: Option<String>,
    pub background_pixels: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameTruth {
    pub frame: String,
    pub changed_pixels: usize,
    pub blob_changed: Vec<usize>,
    pub blob_pixels: Vec<usize>,
}

/// Contents of `oracle.json` from `synth`.
#[derive(Debug, Clone, Serialize)]
pub struct Oracle {
    pub scene: SceneTruth,
    pub frames: Vec<FrameTruth>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthResult {
    pub kind: &'static str,
    pub width: usize,
    pub height: usize,
    pub frames: Vec<String>,
    pub oracle: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[]), 0.0);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn stream_lines_are_tagged() {
        let report = MotionReport {
            frame_index: 7,
            areas: Vec::new(),
            a_changed_total: 0.0,
            d_changed_mean: 0.0,
            delta_mean: 0.0,
            alert: false,
        };
        let line = serde_json::to_string(&StreamLine::Motion(&report)).unwrap();
        assert!(line.starts_with(r#"{"type":"motion","frame_index":7"#), "{line}");
    }
}
