use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use depthseg::{Connectivity, DetectorConfig, GrowthParams, SegmentationParams, TrackerConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Every tunable of the pipeline in one flat document. Missing keys take
/// their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub t_mm: u16,
    pub seg_min_region_pixels: usize,
    pub connectivity: Connectivity,
    pub min_region_pixels: usize,
    pub max_seeds: usize,
    pub min_aspect: f64,
    pub max_aspect: f64,
    pub min_area_frac: f64,
    pub max_area_frac: f64,
    pub epsilon_mm: u16,
    pub grid_cell: usize,
    pub grid_connectivity: Connectivity,
    pub alert_pct: f64,
    pub persistence: usize,
    pub gray_clamp_mm: u16,
    pub out: PathBuf,
    pub dump_gray: bool,
    pub dump_masks: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let seg = SegmentationParams::default();
        let growth = GrowthParams::default();
        let det = DetectorConfig::default();
        let tracker = TrackerConfig::default();
        PipelineConfig {
            t_mm: seg.body_span_t,
            seg_min_region_pixels: seg.min_region_pixels,
            connectivity: growth.connectivity,
            min_region_pixels: growth.min_region_pixels,
            max_seeds: growth.max_seeds,
            min_aspect: det.min_aspect,
            max_aspect: det.max_aspect,
            min_area_frac: det.min_area_frac,
            max_area_frac: det.max_area_frac,
            epsilon_mm: tracker.diff_epsilon,
            grid_cell: tracker.grid_cell,
            grid_connectivity: tracker.grid_connectivity,
            alert_pct: tracker.area_alert_pct,
            persistence: tracker.persistence,
            gray_clamp_mm: tracker.gray_clamp,
            out: PathBuf::from("depthseg-out"),
            dump_gray: false,
            dump_masks: false,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn segmentation(&self) -> SegmentationParams {
        SegmentationParams {
            body_span_t: self.t_mm,
            min_region_pixels: self.seg_min_region_pixels,
        }
    }

    pub fn growth(&self) -> GrowthParams {
        GrowthParams {
            connectivity: self.connectivity,
            min_region_pixels: self.min_region_pixels,
            max_seeds: self.max_seeds,
        }
    }

    pub fn detector(&self) -> DetectorConfig {
        DetectorConfig {
            min_aspect: self.min_aspect,
            max_aspect: self.max_aspect,
            min_area_frac: self.min_area_frac,
            max_area_frac: self.max_area_frac,
        }
    }

    pub fn tracker(&self) -> TrackerConfig {
        TrackerConfig {
            diff_epsilon: self.epsilon_mm,
            grid_cell: self.grid_cell,
            grid_connectivity: self.grid_connectivity,
            area_alert_pct: self.alert_pct,
            persistence: self.persistence,
            gray_clamp: self.gray_clamp_mm,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.segmentation().validate()?;
        self.detector().validate()?;
        self.tracker().validate()?;
        if self.max_seeds == 0 {
            return Err(depthseg::Error::InvalidConfig("max_seeds must be positive".into()).into());
        }
        Ok(())
    }
}

fn parse_connectivity(s: &str) -> Result<Connectivity, String> {
    let n: u8 = s.parse().map_err(|_| format!("expected 4 or 8, got {s:?}"))?;
    Connectivity::try_from(n)
}

/// Command-line overrides, applied on top of the `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Flat JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Write recalibrated gray difference images (monitor).
    #[arg(long, global = true)]
    pub dump_gray: bool,
    /// Write driver and candidate masks (locate-driver, monitor).
    #[arg(long, global = true)]
    pub dump_masks: bool,
    /// Body depth span T used to split the histogram, mm.
    #[arg(long, global = true, value_name = "MM")]
    pub t_mm: Option<u16>,
    /// Drop depth intervals selecting fewer pixels.
    #[arg(long, global = true, value_name = "N")]
    pub seg_min_region_pixels: Option<usize>,
    /// Region growing neighbourhood, 4 or 8.
    #[arg(long, global = true, value_parser = parse_connectivity)]
    pub connectivity: Option<Connectivity>,
    /// Smallest grown region kept.
    #[arg(long, global = true, value_name = "N")]
    pub min_region_pixels: Option<usize>,
    /// Seeds tried per depth interval.
    #[arg(long, global = true, value_name = "N")]
    pub max_seeds: Option<usize>,
    #[arg(long, global = true)]
    pub min_aspect: Option<f64>,
    #[arg(long, global = true)]
    pub max_aspect: Option<f64>,
    #[arg(long, global = true)]
    pub min_area_frac: Option<f64>,
    #[arg(long, global = true)]
    pub max_area_frac: Option<f64>,
    /// Depth change below which a pixel counts as unchanged, mm.
    #[arg(long, global = true, value_name = "MM")]
    pub epsilon_mm: Option<u16>,
    /// Max-pooling cell side, pixels.
    #[arg(long, global = true, value_name = "PX")]
    pub grid_cell: Option<usize>,
    /// Changed-cell neighbourhood, 4 or 8.
    #[arg(long, global = true, value_parser = parse_connectivity)]
    pub grid_connectivity: Option<Connectivity>,
    /// Changed area, percent of the driver region, that counts as distraction.
    #[arg(long, global = true, value_name = "PCT")]
    pub alert_pct: Option<f64>,
    /// Consecutive frames above the alert threshold before alerting.
    #[arg(long, global = true, value_name = "FRAMES")]
    pub persistence: Option<usize>,
    /// Depth change at which the gray ramp saturates, mm.
    #[arg(long, global = true, value_name = "MM")]
    pub gray_clamp_mm: Option<u16>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<PipelineConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*
            };
        }
        apply!(
            out,
            t_mm,
            seg_min_region_pixels,
            connectivity,
            min_region_pixels,
            max_seeds,
            min_aspect,
            max_aspect,
            min_area_frac,
            max_area_frac,
            epsilon_mm,
            grid_cell,
            grid_connectivity,
            alert_pct,
            persistence,
            gray_clamp_mm
        );
        cfg.dump_gray |= self.dump_gray;
        cfg.dump_masks |= self.dump_masks;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = PipelineConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<PipelineConfig>(&text).unwrap(), cfg);
        assert_eq!(cfg.tracker(), TrackerConfig::default());
        assert_eq!(cfg.growth(), GrowthParams::default());
    }

    #[test]
    fn partial_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"t_mm": 600, "persistence": 9, "grid_connectivity": 4}"#).unwrap();
        let args = ConfigArgs {
            config: Some(path),
            persistence: Some(3),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.t_mm, 600);
        assert_eq!(cfg.persistence, 3);
        assert_eq!(cfg.grid_connectivity, Connectivity::Four);
        assert_eq!(cfg.epsilon_mm, 50);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"t_mmm": 600}"#).unwrap();
        let args = ConfigArgs {
            config: Some(path.clone()),
            ..Default::default()
        };
        assert!(matches!(args.resolve(), Err(CliError::Json { .. })));
        fs::write(&path, r#"{"connectivity": 6}"#).unwrap();
        assert!(args.resolve().is_err());
        let args = ConfigArgs {
            epsilon_mm: Some(0),
            ..Default::default()
        };
        assert_eq!(args.resolve().unwrap_err().exit_code(), crate::error::EXIT_INPUT);
    }
}
