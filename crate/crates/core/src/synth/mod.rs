//! Deterministic synthetic depth scenes and motion sequences with exact
//! ground truth.
//!
//! Surfaces are painted in a fixed order: background plane, floor ramp, then
//! blobs in declaration order, so later blobs occlude everything before
//! them. Jitter is uniform integer noise drawn from a seeded generator on a
//! lattice of `jitter_cell` pixels and bilinearly interpolated between
//! lattice points; `jitter_cell = 1` gives independent per-pixel noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{DepthFrame, Rect};
use crate::mask::PixelMask;

pub mod presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Rectangle,
    Ellipse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plane {
    pub depth: u16,
    #[serde(default)]
    pub jitter: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobSpec {
    pub shape: Shape,
    pub bbox: Rect,
    pub depth: u16,
    /// Uniform depth noise amplitude, +/- mm.
    #[serde(default, alias = "depth_jitter")]
    pub jitter: u16,
    /// Hidden blobs only appear while one of their motions is active.
    #[serde(default)]
    pub hidden: bool,
}

/// Floor plane seen in perspective: depth changes linearly per image row
/// from `top_row` to the bottom of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampSpec {
    pub top_row: usize,
    pub start_depth: u16,
    pub mm_per_row: i32,
}

fn default_jitter_cell() -> usize {
    16
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    /// `None` leaves uncovered pixels at 0 (no measurement).
    #[serde(default)]
    pub background: Option<Plane>,
    #[serde(default)]
    pub ramp: Option<RampSpec>,
    #[serde(default)]
    pub blobs: Vec<BlobSpec>,
    #[serde(default = "default_jitter_cell")]
    pub jitter_cell: usize,
    pub rng_seed: u64,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.width == 0 || self.height == 0 {
            return bad(format!("dimensions {}x{}", self.width, self.height));
        }
        if self.jitter_cell == 0 {
            return bad("jitter_cell must be at least 1".into());
        }
        if let Some(bg) = &self.background {
            if bg.depth == 0 {
                return bad("background depth must be positive".into());
            }
        }
        if let Some(r) = &self.ramp {
            if r.top_row >= self.height || r.start_depth == 0 {
                return bad(format!("ramp {r:?} outside frame or at zero depth"));
            }
        }
        for (i, b) in self.blobs.iter().enumerate() {
            if !b.bbox.fits_within(self.width, self.height) {
                return bad(format!("blob {i} bbox {:?} outside frame", b.bbox));
            }
            if b.depth == 0 {
                return bad(format!("blob {i} has zero depth"));
            }
        }
        Ok(())
    }
}

/// Per-surface ground truth for one rendered frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneOracle {
    pub blob_masks: Vec<PixelMask>,
    pub blob_counts: Vec<usize>,
    pub floor_mask: Option<PixelMask>,
    pub floor_count: usize,
    pub background_count: usize,
}

struct JitterField {
    cell: usize,
    cols: usize,
    amplitude: u16,
    lattice: Vec<i32>,
}

impl JitterField {
    // Sized for any anchor inside a width x height frame.
    fn new(rng: &mut ChaCha8Rng, amplitude: u16, cell: usize, width: usize, height: usize) -> Self {
        if amplitude == 0 {
            return JitterField {
                cell,
                cols: 0,
                amplitude,
                lattice: Vec::new(),
            };
        }
        let cols = width.div_ceil(cell) + 1;
        let rows = height.div_ceil(cell) + 1;
        let j = amplitude as i32;
        let lattice = (0..cols * rows).map(|_| rng.random_range(-j..=j)).collect();
        JitterField {
            cell,
            cols,
            amplitude,
            lattice,
        }
    }

    /// Offset at `(dx, dy)` relative to the field's anchor.
    fn sample(&self, dx: usize, dy: usize) -> i32 {
        if self.amplitude == 0 {
            return 0;
        }
        let (gx, gy) = (dx / self.cell, dy / self.cell);
        let (rx, ry) = (dx % self.cell, dy % self.cell);
        let at = |x: usize, y: usize| self.lattice[y * self.cols + x];
        if rx == 0 && ry == 0 {
            return at(gx, gy);
        }
        let fx = rx as f64 / self.cell as f64;
        let fy = ry as f64 / self.cell as f64;
        let top = at(gx, gy) as f64 * (1.0 - fx) + at(gx + 1, gy) as f64 * fx;
        let bottom = at(gx, gy + 1) as f64 * (1.0 - fx) + at(gx + 1, gy + 1) as f64 * fx;
        (top * (1.0 - fy) + bottom * fy).round() as i32
    }
}

fn clamp_depth(d: i64) -> u16 {
    d.clamp(1, u16::MAX as i64) as u16
}

fn in_shape(shape: Shape, bbox: &Rect, x: usize, y: usize) -> bool {
    match shape {
        Shape::Rectangle => bbox.contains(x, y),
        Shape::Ellipse => {
            let rx = bbox.w as f64 / 2.0;
            let ry = bbox.h as f64 / 2.0;
            let nx = (x as f64 + 0.5 - (bbox.x as f64 + rx)) / rx;
            let ny = (y as f64 + 0.5 - (bbox.y as f64 + ry)) / ry;
            nx * nx + ny * ny <= 1.0
        }
    }
}

/// Where a blob is drawn in one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlobState {
    pub bbox: Rect,
    pub depth: i64,
    pub visible: bool,
}

// Surface owning each pixel.
pub(crate) const OWNER_NONE: u16 = 0;
pub(crate) const OWNER_BACKGROUND: u16 = 1;
pub(crate) const OWNER_FLOOR: u16 = 2;
pub(crate) const OWNER_BLOB0: u16 = 3;

/// A scene with its noise fields drawn, ready to render any blob layout.
pub struct Scene {
    spec: SceneSpec,
    background_field: JitterField,
    blob_fields: Vec<JitterField>,
}

impl Scene {
    pub fn new(spec: SceneSpec) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        let (w, h, cell) = (spec.width, spec.height, spec.jitter_cell);
        let bg_jitter = spec.background.map_or(0, |b| b.jitter);
        let background_field = JitterField::new(&mut rng, bg_jitter, cell, w, h);
        let blob_fields = spec
            .blobs
            .iter()
            .map(|b| JitterField::new(&mut rng, b.jitter, cell, w, h))
            .collect();
        Ok(Scene {
            spec,
            background_field,
            blob_fields,
        })
    }

    pub fn spec(&self) -> &SceneSpec {
        &self.spec
    }

    pub fn base_states(&self) -> Vec<BlobState> {
        self.spec
            .blobs
            .iter()
            .map(|b| BlobState {
                bbox: b.bbox,
                depth: b.depth as i64,
                visible: !b.hidden,
            })
            .collect()
    }

    /// Renders the frame and the owner label of every pixel.
    pub(crate) fn render(&self, states: &[BlobState]) -> (DepthFrame, Vec<u16>) {
        let (w, h) = (self.spec.width, self.spec.height);
        let mut depth = vec![0u16; w * h];
        let mut owner = vec![OWNER_NONE; w * h];

        if let Some(bg) = self.spec.background {
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    depth[i] = clamp_depth(bg.depth as i64 + self.background_field.sample(x, y) as i64);
                    owner[i] = OWNER_BACKGROUND;
                }
            }
        }
        if let Some(r) = self.spec.ramp {
            for y in r.top_row..h {
                let d = clamp_depth(r.start_depth as i64 + (y - r.top_row) as i64 * r.mm_per_row as i64);
                depth[y * w..(y + 1) * w].fill(d);
                owner[y * w..(y + 1) * w].fill(OWNER_FLOOR);
            }
        }
        for (k, ((blob, state), field)) in self.spec.blobs.iter().zip(states).zip(&self.blob_fields).enumerate() {
            if !state.visible {
                continue;
            }
            let b = state.bbox;
            for y in b.y..b.bottom() {
                for x in b.x..b.right() {
                    if in_shape(blob.shape, &b, x, y) {
                        let i = y * w + x;
                        depth[i] = clamp_depth(state.depth + field.sample(x - b.x, y - b.y) as i64);
                        owner[i] = OWNER_BLOB0 + k as u16;
                    }
                }
            }
        }
        (DepthFrame::new(w, h, depth).expect("scene-sized frame"), owner)
    }

    pub(crate) fn oracle_from_owners(&self, owner: &[u16]) -> SceneOracle {
        let (w, h) = (self.spec.width, self.spec.height);
        let mask_of = |label: u16| PixelMask::from_bits(w, h, owner.iter().map(|&o| o == label).collect()).unwrap();
        let blob_masks: Vec<PixelMask> = (0..self.spec.blobs.len())
            .map(|k| mask_of(OWNER_BLOB0 + k as u16))
            .collect();
        let blob_counts = blob_masks.iter().map(PixelMask::count).collect();
        let floor_mask = self.spec.ramp.map(|_| mask_of(OWNER_FLOOR));
        let floor_count = floor_mask.as_ref().map_or(0, PixelMask::count);
        SceneOracle {
            blob_masks,
            blob_counts,
            floor_mask,
            floor_count,
            background_count: owner.iter().filter(|&&o| o == OWNER_BACKGROUND).count(),
        }
    }
}

/// Renders a scene and its per-blob visibility masks.
pub fn gen_scene(spec: &SceneSpec) -> Result<(DepthFrame, SceneOracle)> {
    let scene = Scene::new(spec.clone())?;
    let (frame, owner) = scene.render(&scene.base_states());
    let oracle = scene.oracle_from_owners(&owner);
    Ok((frame, oracle))
}

/// Scripted change applied to one blob while `onset <= t < onset + duration`.
/// On active frame `k` (1 on the onset frame) the blob is offset by
/// `min(k, steps)` times the per-frame rates. Outside the active span the
/// blob is in its base state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSpec {
    pub blob: usize,
    #[serde(default)]
    pub dx: i64,
    #[serde(default)]
    pub dy: i64,
    #[serde(default)]
    pub dw: i64,
    #[serde(default)]
    pub dh: i64,
    #[serde(default)]
    pub ddepth: i64,
    pub onset: usize,
    pub duration: usize,
    /// Increments after which the blob holds still; defaults to `duration`.
    #[serde(default)]
    pub steps: Option<usize>,
}

impl MotionSpec {
    pub fn is_active(&self, t: usize) -> bool {
        t >= self.onset && t < self.onset + self.duration
    }

    fn apply(&self, t: usize, state: &mut BlobState) {
        let k = ((t - self.onset + 1).min(self.steps.unwrap_or(self.duration))) as i64;
        let b = state.bbox;
        let x = b.x as i64 + k * self.dx;
        let y = b.y as i64 + k * self.dy;
        let w = b.w as i64 + k * self.dw;
        let h = b.h as i64 + k * self.dh;
        state.bbox = if x < 0 || y < 0 || w < 1 || h < 1 {
            // degenerate; rejected when the sequence is validated
            Rect::new(0, 0, 0, 0)
        } else {
            Rect::new(x as usize, y as usize, w as usize, h as usize)
        };
        state.depth += k * self.ddepth;
        state.visible = true;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub base: SceneSpec,
    #[serde(default)]
    pub motions: Vec<MotionSpec>,
    pub frame_count: usize,
}

/// Ground truth for one frame of a sequence, relative to frame 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOracle {
    /// Pixels whose owning surface differs from frame 0, or whose owning
    /// blob has moved or changed depth since frame 0.
    pub changed: PixelMask,
    pub changed_count: usize,
    /// Changed pixels owned by each blob now or in frame 0.
    pub blob_a_c: Vec<usize>,
    pub blob_counts: Vec<usize>,
}

/// Renders sequence frames on demand.
pub struct SequenceGenerator {
    scene: Scene,
    motions: Vec<MotionSpec>,
    frame_count: usize,
    states0: Vec<BlobState>,
    owner0: Vec<u16>,
}

impl SequenceGenerator {
    pub fn new(spec: SequenceSpec) -> Result<Self> {
        let scene = Scene::new(spec.base)?;
        let n_blobs = scene.spec.blobs.len();
        for (i, m) in spec.motions.iter().enumerate() {
            if m.blob >= n_blobs {
                return Err(Error::InvalidSpec(format!("motion {i} references blob {}", m.blob)));
            }
        }
        if spec.frame_count == 0 {
            return Err(Error::InvalidSpec("frame_count must be positive".into()));
        }
        let mut generator = SequenceGenerator {
            scene,
            motions: spec.motions,
            frame_count: spec.frame_count,
            states0: Vec::new(),
            owner0: Vec::new(),
        };
        let (w, h) = (generator.scene.spec.width, generator.scene.spec.height);
        for t in 0..generator.frame_count {
            for (k, s) in generator.states_at(t).iter().enumerate() {
                if s.visible && (!s.bbox.fits_within(w, h) || !(1..=u16::MAX as i64).contains(&s.depth)) {
                    return Err(Error::InvalidSpec(format!(
                        "blob {k} leaves the frame or depth range at frame {t}: {s:?}"
                    )));
                }
            }
        }
        generator.states0 = generator.states_at(0);
        generator.owner0 = generator.scene.render(&generator.states0).1;
        Ok(generator)
    }

    pub fn frame_count(&self) -> usize {
        self.frame_count
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn states_at(&self, t: usize) -> Vec<BlobState> {
        let mut states = self.scene.base_states();
        for m in self.motions.iter().filter(|m| m.is_active(t)) {
            m.apply(t, &mut states[m.blob]);
        }
        states
    }

    /// Frame-0 ground truth with per-blob masks.
    pub fn base_oracle(&self) -> SceneOracle {
        self.scene.oracle_from_owners(&self.owner0)
    }

    pub fn frame(&self, t: usize) -> (DepthFrame, FrameOracle) {
        let states = self.states_at(t);
        let (frame, owner) = self.scene.render(&states);
        let n_blobs = states.len();
        let moved: Vec<bool> = states.iter().zip(&self.states0).map(|(a, b)| a != b).collect();
        let blob_of = |o: u16| (o >= OWNER_BLOB0).then(|| (o - OWNER_BLOB0) as usize);

        let (w, h) = (frame.width(), frame.height());
        let mut changed = PixelMask::new(w, h);
        let mut blob_a_c = vec![0usize; n_blobs];
        let mut blob_counts = vec![0usize; n_blobs];
        for (i, (&now, &then)) in owner.iter().zip(&self.owner0).enumerate() {
            if let Some(b) = blob_of(now) {
                blob_counts[b] += 1;
            }
            let differs = now != then || blob_of(now).is_some_and(|b| moved[b]);
            if differs {
                changed.set_index(i, true);
                if let Some(b) = blob_of(now) {
                    blob_a_c[b] += 1;
                }
                if let Some(b) = blob_of(then).filter(|&b| Some(b) != blob_of(now)) {
                    blob_a_c[b] += 1;
                }
            }
        }
        let changed_count = changed.count();
        (
            frame,
            FrameOracle {
                changed,
                changed_count,
                blob_a_c,
                blob_counts,
            },
        )
    }
}

/// Contents of a synthesis spec file: `{"scene": {...}}` or
/// `{"sequence": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthSpec {
    Scene(SceneSpec),
    Sequence(SequenceSpec),
}

/// Renders every frame of a sequence.
pub fn gen_sequence(spec: &SequenceSpec) -> Result<(Vec<DepthFrame>, Vec<FrameOracle>)> {
    let generator = SequenceGenerator::new(spec.clone())?;
    Ok((0..generator.frame_count()).map(|t| generator.frame(t)).unzip())
}
