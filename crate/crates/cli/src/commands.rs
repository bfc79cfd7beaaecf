use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use depthseg::motion::{recalibrate_gray, set_reference, MotionTracker};
use depthseg::pgm::encode_gray;
use depthseg::synth::{gen_scene, SceneOracle, SequenceGenerator, SynthSpec};
use depthseg::{
    classify_regions, load_depth_frame, save_depth_frame, segment_frame, select_driver, DepthFrame, Error, PixelMask,
};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::CliError;
use crate::report::*;

pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const STREAM_FILE: &str = "monitor.ndjson";
pub const ORACLE_FILE: &str = "oracle.json";

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn write_mask(path: &Path, mask: &PixelMask) -> Result<(), CliError> {
    write_file(path, &encode_gray(mask.width(), mask.height(), &mask.to_gray()))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Per-input output subdirectory names: the file stems, or `NN_stem` for
/// every input when two stems collide.
fn output_names(inputs: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = inputs
        .iter()
        .map(|p| {
            p.file_stem()
                .map_or_else(|| "frame".into(), |s| s.to_string_lossy().into_owned())
        })
        .collect();
    let unique: BTreeSet<&String> = stems.iter().collect();
    if unique.len() == stems.len() {
        return stems;
    }
    stems.iter().enumerate().map(|(i, s)| format!("{i:02}_{s}")).collect()
}

fn timed<T>(f: impl FnOnce() -> Result<T, CliError>) -> Result<(T, f64), CliError> {
    let start = Instant::now();
    f().map(|v| (v, ms_since(start)))
}

/// Histogram split and region growing on each input frame.
pub fn segment(inputs: &[PathBuf], cfg: &PipelineConfig) -> Result<RunReport<Vec<SegmentResult>>, CliError> {
    let start = Instant::now();
    let names = output_names(inputs);
    let out = &cfg.out;
    create_dir(out)?;
    let done: Vec<(SegmentResult, f64)> = inputs
        .par_iter()
        .zip(&names)
        .map(|(path, name)| timed(|| segment_one(path, name, cfg)))
        .collect::<Result<_, _>>()?;
    let (results, per_item): (Vec<_>, Vec<_>) = done.into_iter().unzip();
    let report = RunReport::new(
        "segment",
        inputs.iter().map(|p| display(p)).collect(),
        cfg.clone(),
        results,
        Timings::from_items(ms_since(start), per_item),
    );
    report.write(out)?;
    Ok(report)
}

fn segment_one(path: &Path, name: &str, cfg: &PipelineConfig) -> Result<SegmentResult, CliError> {
    let frame = load_depth_frame(path)?;
    let seg = segment_frame(&frame, &cfg.segmentation(), &cfg.growth())?;
    let dir = cfg.out.join(name);
    create_dir(&dir)?;

    let csv_rel = format!("{name}/{HISTOGRAM_FILE}");
    let csv_path = cfg.out.join(&csv_rel);
    let mut writer = csv::Writer::from_path(&csv_path)?;
    writer.write_record(["depth_mm", "count"])?;
    for (v, c) in seg.histogram.iter() {
        writer.serialize((v, c))?;
    }
    writer.flush().map_err(|e| CliError::io(&csv_path, e))?;

    let mut regions = Vec::with_capacity(seg.regions.len());
    for (i, (interval, region)) in seg.regions.iter().enumerate() {
        let rel = format!("{name}/region_{i:02}.pgm");
        write_mask(&cfg.out.join(&rel), &region.mask)?;
        regions.push(RegionReport::new(*interval, region, rel));
    }
    Ok(SegmentResult {
        input: display(path),
        width: frame.width(),
        height: frame.height(),
        histogram: HistogramSummary::from(&seg.histogram),
        histogram_csv: csv_rel,
        intervals: seg
            .intervals
            .iter()
            .map(|&iv| IntervalReport::new(iv, &seg.histogram))
            .collect(),
        regions,
    })
}

/// Finds the driver in each input frame. A frame without one is reported
/// with status `no_driver_found` rather than failing the run.
pub fn locate_driver(inputs: &[PathBuf], cfg: &PipelineConfig) -> Result<RunReport<Vec<DriverResult>>, CliError> {
    let start = Instant::now();
    let names = output_names(inputs);
    create_dir(&cfg.out)?;
    let done: Vec<(DriverResult, f64)> = inputs
        .par_iter()
        .zip(&names)
        .map(|(path, name)| timed(|| locate_one(path, name, cfg)))
        .collect::<Result<_, _>>()?;
    let (results, per_item): (Vec<_>, Vec<_>) = done.into_iter().unzip();
    let report = RunReport::new(
        "locate-driver",
        inputs.iter().map(|p| display(p)).collect(),
        cfg.clone(),
        results,
        Timings::from_items(ms_since(start), per_item),
    );
    report.write(&cfg.out)?;
    Ok(report)
}

fn locate_one(path: &Path, name: &str, cfg: &PipelineConfig) -> Result<DriverResult, CliError> {
    let frame = load_depth_frame(path)?;
    let seg = segment_frame(&frame, &cfg.segmentation(), &cfg.growth())?;
    let regions = seg.regions.into_iter().map(|(_, r)| r).collect();
    let candidates = classify_regions(regions, &cfg.detector(), (frame.width(), frame.height()));
    let driver = select_driver(&candidates).map(|d| {
        candidates
            .iter()
            .position(|c| std::ptr::eq(c, d))
            .expect("driver is one of the candidates")
    });
    let mut masks = Vec::new();
    if cfg.dump_masks {
        for (i, c) in candidates.iter().enumerate() {
            let rel = format!("{name}/candidate_{i:02}.pgm");
            write_mask(&cfg.out.join(&rel), &c.region.mask)?;
            masks.push(rel);
        }
    }
    Ok(DriverResult {
        input: display(path),
        status: if driver.is_some() {
            DriverStatus::Found
        } else {
            DriverStatus::NoDriverFound
        },
        driver_bbox: driver.map(|i| candidates[i].region.bbox),
        candidates: candidates.iter().map(CandidateReport::from).collect(),
        driver,
        masks,
    })
}

/// The frames to monitor: every `.pgm` in a single directory argument, in
/// file name order, or the listed files as given.
pub fn monitor_inputs(args: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    if let [dir] = args {
        if dir.is_dir() {
            let mut frames = Vec::new();
            for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
                let path = entry.map_err(|e| CliError::io(dir, e))?.path();
                if path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")) {
                    frames.push(path);
                }
            }
            frames.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
            if frames.is_empty() {
                return Err(CliError::Input(format!("no .pgm frames in {}", dir.display())));
            }
            return Ok(frames);
        }
    }
    Ok(args.to_vec())
}

/// Driver location on the first frame, then motion tracking over the rest.
/// Each frame's report (and any alert) is written to `stream` as one JSON
/// line as soon as it is computed.
pub fn monitor(
    args: &[PathBuf],
    cfg: &PipelineConfig,
    stream: &mut dyn Write,
) -> Result<RunReport<MonitorResult>, CliError> {
    let start = Instant::now();
    let frames = monitor_inputs(args)?;
    let out = &cfg.out;
    create_dir(out)?;

    let first = load_depth_frame(&frames[0])?;
    let seg = segment_frame(&first, &cfg.segmentation(), &cfg.growth())?;
    let regions = seg.regions.into_iter().map(|(_, r)| r).collect();
    let candidates = classify_regions(regions, &cfg.detector(), (first.width(), first.height()));
    let driver = select_driver(&candidates).ok_or(Error::NoDriverFound)?;
    let reference = set_reference(&first, driver)?;
    if cfg.dump_masks {
        write_mask(&out.join("driver_mask.pgm"), &driver.region.mask)?;
    }
    let (window, a_r) = (reference.window, reference.a_r);
    let mut tracker = MotionTracker::new(reference, cfg.tracker())?;

    let stream_path = out.join(STREAM_FILE);
    let mut file = Vec::new();
    let mut emit = |line: StreamLine| -> Result<(), CliError> {
        let mut text = serde_json::to_string(&line).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        file.extend_from_slice(text.as_bytes());
        stream
            .write_all(text.as_bytes())
            .and_then(|_| stream.flush())
            .map_err(|e| CliError::Output(e.to_string()))
    };

    let mut reports = Vec::with_capacity(frames.len());
    let mut alerts = Vec::new();
    let mut per_frame = Vec::with_capacity(frames.len());
    for (t, path) in frames.iter().enumerate() {
        let frame = if t == 0 { first.clone() } else { load_depth_frame(path)? };
        if (frame.width(), frame.height()) != (first.width(), first.height()) {
            return Err(CliError::Input(format!(
                "{}: {}x{} frame, expected {}x{}",
                path.display(),
                frame.width(),
                frame.height(),
                first.width(),
                first.height()
            )));
        }
        let step_start = Instant::now();
        let step = tracker.step(t, &frame)?;
        per_frame.push(ms_since(step_start));
        emit(StreamLine::Motion(&step.report))?;
        if let Some(alert) = &step.alert {
            emit(StreamLine::Alert(alert))?;
        }
        if cfg.dump_gray {
            let gray = recalibrate_gray(&step.diff, &cfg.tracker());
            let path = out.join(format!("gray/frame_{t:04}.pgm"));
            write_file(&path, &encode_gray(gray.width, gray.height, &gray.pixels))?;
        }
        reports.push(step.report);
        alerts.extend(step.alert);
    }
    write_file(&stream_path, &file)?;

    let results = MonitorResult {
        frame_count: frames.len(),
        reference: display(&frames[0]),
        driver: CandidateReport::from(driver),
        window,
        a_r,
        reports,
        alerts,
    };
    let report = RunReport::new(
        "monitor",
        frames.iter().map(|p| display(p)).collect(),
        cfg.clone(),
        results,
        Timings::from_items(ms_since(start), per_frame),
    );
    report.write(out)?;
    Ok(report)
}

fn scene_truth(oracle: &SceneOracle, out: &Path) -> Result<SceneTruth, CliError> {
    let mut blobs = Vec::with_capacity(oracle.blob_masks.len());
    for (i, mask) in oracle.blob_masks.iter().enumerate() {
        let rel = format!("masks/blob_{i:02}.pgm");
        write_mask(&out.join(&rel), mask)?;
        blobs.push(BlobTruth {
            pixels: oracle.blob_counts[i],
            bbox: mask.bbox(),
            mask: rel,
        });
    }
    let floor_mask = match &oracle.floor_mask {
        Some(mask) => {
            let rel = "masks/floor.pgm".to_string();
            write_mask(&out.join(&rel), mask)?;
            Some(rel)
        }
        None => None,
    };
    Ok(SceneTruth {
        blobs,
        floor_pixels: oracle.floor_count,
        floor_mask,
        background_pixels: oracle.background_count,
    })
}

fn save_frame(frame: &DepthFrame, out: &Path, rel: &str) -> Result<(), CliError> {
    let path = out.join(rel);
    if let Some(dir) = path.parent() {
        create_dir(dir)?;
    }
    save_depth_frame(frame, path).map_err(Into::into)
}

fn changed_rel(t: usize) -> String {
    format!("masks/changed_{t:04}.pgm")
}

/// Renders a scene or sequence spec to 16-bit frames plus ground truth.
pub fn synth(spec_path: &Path, cfg: &PipelineConfig) -> Result<RunReport<SynthResult>, CliError> {
    let start = Instant::now();
    let text = fs::read_to_string(spec_path).map_err(|e| CliError::io(spec_path, e))?;
    let spec: SynthSpec = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: spec_path.to_path_buf(),
        source,
    })?;
    let out = &cfg.out;
    create_dir(out)?;

    let (kind, width, height, frames, oracle, per_item) = match spec {
        SynthSpec::Scene(scene_spec) => {
            let (width, height) = (scene_spec.width, scene_spec.height);
            let (frame, truth) = gen_scene(&scene_spec)?;
            let rel = "frame.pgm".to_string();
            save_frame(&frame, out, &rel)?;
            let oracle = Oracle {
                scene: scene_truth(&truth, out)?,
                frames: Vec::new(),
            };
            ("scene", width, height, vec![rel], oracle, vec![ms_since(start)])
        }
        SynthSpec::Sequence(seq_spec) => {
            let (width, height) = (seq_spec.base.width, seq_spec.base.height);
            let gen = SequenceGenerator::new(seq_spec)?;
            let rendered: Vec<(FrameTruth, f64)> = (0..gen.frame_count())
                .into_par_iter()
                .map(|t| {
                    timed(|| {
                        let (frame, truth) = gen.frame(t);
                        let rel = format!("frames/frame_{t:04}.pgm");
                        save_frame(&frame, out, &rel)?;
                        if cfg.dump_masks {
                            write_mask(&out.join(changed_rel(t)), &truth.changed)?;
                        }
                        Ok(FrameTruth {
                            frame: rel,
                            changed_pixels: truth.changed_count,
                            blob_changed: truth.blob_a_c,
                            blob_pixels: truth.blob_counts,
                        })
                    })
                })
                .collect::<Result<_, _>>()?;
            let (frames_truth, per_item): (Vec<_>, Vec<_>) = rendered.into_iter().unzip();
            let oracle = Oracle {
                scene: scene_truth(&gen.base_oracle(), out)?,
                frames: frames_truth,
            };
            let frames = oracle.frames.iter().map(|f| f.frame.clone()).collect();
            ("sequence", width, height, frames, oracle, per_item)
        }
    };
    let oracle_text = serde_json::to_string_pretty(&oracle).map_err(|e| CliError::Output(e.to_string()))? + "\n";
    write_file(&out.join(ORACLE_FILE), oracle_text.as_bytes())?;

    let results = SynthResult {
        kind,
        width,
        height,
        frames,
        oracle: ORACLE_FILE.into(),
    };
    let report = RunReport::new(
        "synth",
        vec![display(spec_path)],
        cfg.clone(),
        results,
        Timings::from_items(ms_since(start), per_item),
    );
    report.write(out)?;
    Ok(report)
}
