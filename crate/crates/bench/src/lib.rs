//! Shared fixtures for the criterion benchmarks in `benches/`.

use depthseg::synth::{gen_scene, presets, SequenceGenerator};
use depthseg::{locate_driver, motion::set_reference, DepthFrame, MotionTracker, TrackerConfig};

/// A 640x480 cabin frame with driver and passenger.
pub fn cabin_frame() -> DepthFrame {
    gen_scene(&presets::cabin_with_passenger(1)).expect("preset is valid").0
}

/// The reach sequence frames and a tracker referenced on frame 0.
pub fn reach_session() -> (Vec<DepthFrame>, MotionTracker) {
    let gen = SequenceGenerator::new(presets::reach_sequence(1)).expect("preset is valid");
    let frames: Vec<DepthFrame> = (0..gen.frame_count()).map(|t| gen.frame(t).0).collect();
    let driver = locate_driver(
        &frames[0],
        &Default::default(),
        &Default::default(),
        &Default::default(),
    )
    .expect("cabin has a driver");
    let reference = set_reference(&frames[0], &driver).expect("driver is human");
    let tracker = MotionTracker::new(reference, TrackerConfig::default()).expect("default config is valid");
    (frames, tracker)
}
