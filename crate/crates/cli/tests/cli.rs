use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use depthseg::pgm::load_mask;
use depthseg::synth::{presets, SynthSpec};
use depthseg::{save_depth_frame, DepthFrame, Rect};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depthseg"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("spawn depthseg")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_spec(dir: &Path, name: &str, spec: &SynthSpec) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(spec).unwrap()).unwrap();
    path
}

fn synth(dir: &Path, spec: SynthSpec, out: &str) {
    let path = write_spec(dir, &format!("{out}.json"), &spec);
    let o = run(&["synth", path.to_str().unwrap(), "--out", out], dir);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn rect(v: &Value) -> Rect {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn segment_multi_person_matches_every_body() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Scene(presets::multi_person(1)), "scene");
    let o = run(&["segment", "scene/frame.pgm", "--out", "seg"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.path().join("seg/report.json"));
    let result = &r["results"][0];
    assert!(result["intervals"].as_array().unwrap().len() >= 2);
    let regions: Vec<_> = result["regions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|reg| load_mask(dir.path().join("seg").join(reg["mask"].as_str().unwrap())).unwrap())
        .collect();
    for i in 0..4 {
        let truth = load_mask(dir.path().join(format!("scene/masks/blob_{i:02}.pgm"))).unwrap();
        let best = regions.iter().map(|m| m.iou(&truth)).fold(0.0, f64::max);
        assert!(best >= 0.8, "body {i}: best IoU {best}");
    }
    let csv = fs::read_to_string(dir.path().join("seg/frame/histogram.csv")).unwrap();
    assert!(csv.starts_with("depth_mm,count\n"));
    let total: u64 = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 640 * 480);
}

#[test]
fn single_plane_gives_one_interval_and_region() {
    let dir = tempfile::tempdir().unwrap();
    save_depth_frame(&DepthFrame::filled(64, 48, 1800), dir.path().join("plane.pgm")).unwrap();
    let o = run(&["segment", "plane.pgm"], dir.path());
    assert_eq!(code(&o), 0);
    let r = report(&dir.path().join("depthseg-out/report.json"));
    assert_eq!(r["results"][0]["intervals"].as_array().unwrap().len(), 1);
    assert_eq!(r["results"][0]["regions"].as_array().unwrap().len(), 1);
    assert_eq!(r["results"][0]["regions"][0]["pixel_count"], 64 * 48);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    save_depth_frame(&DepthFrame::filled(8, 8, 0), dir.path().join("zero.pgm")).unwrap();
    assert_eq!(code(&run(&["segment", "zero.pgm"], dir.path())), 2);
    assert_eq!(code(&run(&["segment", "missing.pgm"], dir.path())), 2);
    fs::write(dir.path().join("bad.pgm"), b"P2\n1 1\n255\n0").unwrap();
    assert_eq!(code(&run(&["segment", "bad.pgm"], dir.path())), 2);
    fs::write(dir.path().join("cfg.json"), r#"{"nope": 1}"#).unwrap();
    assert_eq!(
        code(&run(&["--config", "cfg.json", "segment", "zero.pgm"], dir.path())),
        2
    );
    assert_eq!(
        code(&run(&["segment", "zero.pgm", "--grid-connectivity", "6"], dir.path())),
        2
    );
}

#[test]
fn locate_driver_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Scene(presets::cabin_with_passenger(2)), "cabin");
    synth(dir.path(), SynthSpec::Scene(presets::empty_cabin(2)), "empty");

    let o = run(
        &["locate-driver", "cabin/frame.pgm", "--out", "ld", "--dump-masks"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.path().join("ld/report.json"));
    let truth = load_mask(
        dir.path()
            .join(format!("cabin/masks/blob_{:02}.pgm", presets::CABIN_DRIVER)),
    )
    .unwrap();
    let found = rect(&r["results"][0]["driver_bbox"]);
    assert!(found.iou(&truth.bbox().unwrap()) >= 0.8, "{found:?}");
    let n = r["results"][0]["candidates"].as_array().unwrap().len();
    assert_eq!(r["results"][0]["masks"].as_array().unwrap().len(), n);

    let o = run(&["locate-driver", "empty/frame.pgm", "--out", "ld2"], dir.path());
    assert_eq!(code(&o), 3);
    let r = report(&dir.path().join("ld2/report.json"));
    assert_eq!(r["results"][0]["status"], "no_driver_found");

    let o = run(
        &[
            "locate-driver",
            "cabin/frame.pgm",
            "--out",
            "ld3",
            "--min-aspect",
            "10",
            "--max-aspect",
            "20",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn monitor_streams_reports_and_alerts() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Sequence(presets::reach_sequence(5)), "reach");
    let o = run(&["monitor", "reach/frames", "--out", "mon", "--dump-gray"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        stdout,
        fs::read_to_string(dir.path().join("mon/monitor.ndjson")).unwrap()
    );
    let lines: Vec<Value> = stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.iter().filter(|l| l["type"] == "motion").count(), 90);
    let alerts: Vec<&Value> = lines.iter().filter(|l| l["type"] == "alert").collect();
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0]["onset_frame"], 30);
    assert!(alerts[0]["areas"][0]["d_changed"].as_f64().unwrap() > 0.0);
    assert_eq!(fs::read_dir(dir.path().join("mon/gray")).unwrap().count(), 90);

    let r = report(&dir.path().join("mon/report.json"));
    assert_eq!(
        r["results"]["window"],
        serde_json::to_value(presets::CABIN_DRIVER_BBOX).unwrap()
    );
    assert_eq!(r["timings"]["per_item_ms"].as_array().unwrap().len(), 90);
}

#[test]
fn monitor_needs_a_driver() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Scene(presets::empty_cabin(1)), "empty");
    assert_eq!(code(&run(&["monitor", "empty/frame.pgm", "--out", "m"], dir.path())), 3);
}

#[test]
fn monitor_rejects_size_changes() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Scene(presets::cabin(1)), "cabin");
    save_depth_frame(&DepthFrame::filled(32, 32, 900), dir.path().join("small.pgm")).unwrap();
    assert_eq!(
        code(&run(
            &["monitor", "cabin/frame.pgm", "small.pgm", "--out", "m"],
            dir.path()
        )),
        2
    );
}

#[test]
fn synth_reruns_are_identical_and_seed_changes_only_jitter() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), SynthSpec::Scene(presets::multi_person(3)), "a");
    synth(dir.path(), SynthSpec::Scene(presets::multi_person(3)), "b");
    synth(dir.path(), SynthSpec::Scene(presets::multi_person(4)), "c");
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/frame.pgm"), read("b/frame.pgm"));
    assert_eq!(read("a/oracle.json"), read("b/oracle.json"));
    assert_ne!(read("a/frame.pgm"), read("c/frame.pgm"));
    for i in 0..4 {
        let m = format!("masks/blob_{i:02}.pgm");
        assert_eq!(read(&format!("a/{m}")), read(&format!("c/{m}")));
    }
}

#[test]
fn bundled_scenes_generate() {
    let scenes = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes");
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(&scenes).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let o = run(&["synth", path.to_str().unwrap(), "--out", &name], dir.path());
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn parallel_inputs_keep_argument_order() {
    let dir = tempfile::tempdir().unwrap();
    for (name, depth) in [("z", 900u16), ("a", 1500), ("m", 2500)] {
        save_depth_frame(
            &DepthFrame::filled(40, 30, depth),
            dir.path().join(format!("{name}.pgm")),
        )
        .unwrap();
    }
    assert_eq!(code(&run(&["segment", "z.pgm", "a.pgm", "m.pgm"], dir.path())), 0);
    let r = report(&dir.path().join("depthseg-out/report.json"));
    let inputs: Vec<&str> = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["input"].as_str().unwrap())
        .collect();
    assert_eq!(inputs, ["z.pgm", "a.pgm", "m.pgm"]);
    assert_eq!(
        code(&run(&["segment", "a.pgm", "a.pgm", "--out", "dup"], dir.path())),
        0
    );
    assert!(dir.path().join("dup/00_a/region_00.pgm").exists());
    assert!(dir.path().join("dup/01_a/region_00.pgm").exists());
}
