//! Ready-made scenes mirroring the situations the toolkit is built for:
//! people at several distances, two people in one depth band, a person on
//! a floor, and an in-car driver view with scripted reaching motion.

use crate::frame::Rect;

use super::{BlobSpec, MotionSpec, Plane, RampSpec, SceneSpec, SequenceSpec, Shape};

fn blob(shape: Shape, bbox: Rect, depth: u16, jitter: u16) -> BlobSpec {
    BlobSpec {
        shape,
        bbox,
        depth,
        jitter,
        hidden: false,
    }
}

fn plane(depth: u16, jitter: u16) -> Option<Plane> {
    Some(Plane { depth, jitter })
}

/// A near rectangle in front of a wall `separation` mm behind it.
pub fn two_planes(separation: u16, rng_seed: u64) -> SceneSpec {
    SceneSpec {
        width: 320,
        height: 240,
        background: plane(1500 + separation, 5),
        ramp: None,
        blobs: vec![blob(Shape::Rectangle, Rect::new(60, 40, 120, 160), 1500, 5)],
        jitter_cell: 16,
        rng_seed,
    }
}

/// One person near the camera and three further back, before a wall.
pub fn multi_person(rng_seed: u64) -> SceneSpec {
    SceneSpec {
        width: 640,
        height: 480,
        background: plane(3600, 5),
        ramp: None,
        blobs: vec![
            blob(Shape::Ellipse, Rect::new(60, 120, 120, 320), 1500, 5),
            blob(Shape::Ellipse, Rect::new(250, 150, 80, 230), 2480, 5),
            blob(Shape::Ellipse, Rect::new(380, 150, 80, 230), 2500, 5),
            blob(Shape::Ellipse, Rect::new(510, 150, 80, 230), 2530, 5),
        ],
        jitter_cell: 16,
        rng_seed,
    }
}

/// Two people side by side at the same distance.
pub fn same_depth_pair(rng_seed: u64) -> SceneSpec {
    SceneSpec {
        width: 320,
        height: 240,
        background: plane(3000, 5),
        ramp: None,
        blobs: vec![
            blob(Shape::Ellipse, Rect::new(40, 30, 90, 190), 1500, 5),
            blob(Shape::Ellipse, Rect::new(190, 30, 90, 190), 1500, 5),
        ],
        jitter_cell: 16,
        rng_seed,
    }
}

/// A person standing on a floor whose depth meets the feet without a step.
pub fn ramp_floor(rng_seed: u64) -> SceneSpec {
    SceneSpec {
        width: 320,
        height: 240,
        background: plane(3500, 5),
        // row 189 (feet) is 2001 mm, row 190 is 2000 mm
        ramp: Some(RampSpec {
            top_row: 150,
            start_depth: 2040,
            mm_per_row: -1,
        }),
        blobs: vec![blob(Shape::Rectangle, Rect::new(130, 40, 60, 150), 2000, 3)],
        jitter_cell: 16,
        rng_seed,
    }
}

pub const CABIN_DRIVER: usize = 1;
pub const CABIN_DRIVER_BBOX: Rect = Rect::new(220, 110, 200, 330);
pub const CABIN_PASSENGER: usize = 2;
pub const CABIN_ARM: usize = 3;

/// In-car view: rear cabin, seat cushion, driver, and a hidden arm used by
/// the reach sequences.
pub fn cabin(rng_seed: u64) -> SceneSpec {
    let mut spec = cabin_with_passenger(rng_seed);
    spec.blobs[CABIN_PASSENGER].hidden = true;
    spec
}

pub fn cabin_with_passenger(rng_seed: u64) -> SceneSpec {
    SceneSpec {
        width: 640,
        height: 480,
        background: plane(2300, 5),
        ramp: None,
        blobs: vec![
            blob(Shape::Rectangle, Rect::new(0, 400, 640, 80), 1150, 5),
            blob(Shape::Ellipse, CABIN_DRIVER_BBOX, 1000, 5),
            blob(Shape::Ellipse, Rect::new(470, 170, 130, 240), 1500, 5),
            BlobSpec {
                hidden: true,
                ..blob(Shape::Rectangle, Rect::new(290, 250, 90, 70), 900, 5)
            },
        ],
        jitter_cell: 16,
        rng_seed,
    }
}

/// Cabin without anyone in it.
pub fn empty_cabin(rng_seed: u64) -> SceneSpec {
    let mut spec = cabin(rng_seed);
    spec.blobs.truncate(1);
    spec
}

fn reach(onset: usize) -> MotionSpec {
    MotionSpec {
        blob: CABIN_ARM,
        dx: -1,
        dy: 0,
        dw: 2,
        dh: 1,
        ddepth: -10,
        onset,
        duration: 30,
        steps: None,
    }
}

/// 90 frames: still for frames 0..30, the arm reaches toward the dashboard
/// over frames 30..60, still again for 60..90.
pub fn reach_sequence(rng_seed: u64) -> SequenceSpec {
    SequenceSpec {
        base: cabin(rng_seed),
        motions: vec![reach(30)],
        frame_count: 90,
    }
}

pub fn static_sequence(rng_seed: u64, frame_count: usize) -> SequenceSpec {
    SequenceSpec {
        base: cabin(rng_seed),
        motions: Vec::new(),
        frame_count,
    }
}

/// 300 frames with three reaches, used for timing.
pub fn long_reach_sequence(rng_seed: u64) -> SequenceSpec {
    SequenceSpec {
        base: cabin(rng_seed),
        motions: vec![reach(30), reach(120), reach(210)],
        frame_count: 300,
    }
}
