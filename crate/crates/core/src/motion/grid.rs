use std::collections::VecDeque;

use crate::frame::Rect;
use crate::growing::Connectivity;
use crate::mask::PixelMask;

use super::diff::DiffImage;
use super::TrackerConfig;

/// Lower-resolution view of a difference image: each cell holds the largest
/// valid `|delta|` among its pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    pub cols: usize,
    pub rows: usize,
    pub cell: usize,
    pub values: Vec<u32>,
    pub changed: PixelMask,
}

impl CellGrid {
    /// Full-resolution pixel extent of a cell; edge cells may be smaller.
    pub fn cell_rect(&self, cx: usize, cy: usize, width: usize, height: usize) -> Rect {
        let x = cx * self.cell;
        let y = cy * self.cell;
        Rect::new(x, y, self.cell.min(width - x), self.cell.min(height - y))
    }
}

pub fn downsample_max(diff: &DiffImage, cfg: &TrackerConfig) -> CellGrid {
    let cell = cfg.grid_cell;
    let cols = diff.width.div_ceil(cell);
    let rows = diff.height.div_ceil(cell);
    let mut values = vec![0u32; cols * rows];
    for y in 0..diff.height {
        let row = (y / cell) * cols;
        for x in 0..diff.width {
            let i = y * diff.width + x;
            if diff.valid[i] {
                let v = &mut values[row + x / cell];
                *v = (*v).max(diff.delta[i].unsigned_abs());
            }
        }
    }
    let eps = cfg.diff_epsilon as u32;
    let bits = values.iter().map(|&v| v > eps).collect();
    CellGrid {
        cols,
        rows,
        cell,
        values,
        changed: PixelMask::from_bits(cols, rows, bits).expect("grid-sized mask"),
    }
}

/// A connected group of changed grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangedArea {
    /// Member cells, at grid resolution.
    pub mask: PixelMask,
    /// Changed full-resolution pixels inside the member cells.
    pub a_c: usize,
    /// Mean current depth over those pixels, mm.
    pub d_changed: f64,
    /// Mean signed depth change over those pixels, mm.
    pub delta_mean: f64,
    /// Tight box around the changed pixels, window coordinates.
    pub bbox: Rect,
}

/// Labels connected changed cells and measures each component at full
/// resolution. Components with fewer than `cell * cell` changed pixels are
/// dropped as noise.
pub fn connected_components(grid: &CellGrid, diff: &DiffImage, connectivity: Connectivity) -> Vec<ChangedArea> {
    let (cols, rows) = (grid.cols, grid.rows);
    let mut seen = PixelMask::new(cols, rows);
    let mut areas = Vec::new();
    let mut queue = VecDeque::new();
    let min_area = grid.cell * grid.cell;

    for start in 0..cols * rows {
        if !grid.changed.get_index(start) || seen.get_index(start) {
            continue;
        }
        let mut members = PixelMask::new(cols, rows);
        seen.set_index(start, true);
        queue.push_back(start);
        let mut a_c = 0usize;
        let mut depth_sum = 0u64;
        let mut delta_sum = 0i64;
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);

        while let Some(c) = queue.pop_front() {
            members.set_index(c, true);
            let (cx, cy) = (c % cols, c / cols);
            let r = grid.cell_rect(cx, cy, diff.width, diff.height);
            for y in r.y..r.bottom() {
                for x in r.x..r.right() {
                    let i = y * diff.width + x;
                    if diff.is_changed(i) {
                        a_c += 1;
                        depth_sum += diff.current[i] as u64;
                        delta_sum += diff.delta[i] as i64;
                        x0 = x0.min(x);
                        y0 = y0.min(y);
                        x1 = x1.max(x);
                        y1 = y1.max(y);
                    }
                }
            }
            for &(dx, dy) in connectivity.offsets() {
                let (Some(nx), Some(ny)) = (cx.checked_add_signed(dx), cy.checked_add_signed(dy)) else {
                    continue;
                };
                if nx >= cols || ny >= rows {
                    continue;
                }
                let n = ny * cols + nx;
                if grid.changed.get_index(n) && !seen.get_index(n) {
                    seen.set_index(n, true);
                    queue.push_back(n);
                }
            }
        }

        if a_c >= min_area.max(1) {
            areas.push(ChangedArea {
                mask: members,
                a_c,
                d_changed: depth_sum as f64 / a_c as f64,
                delta_mean: delta_sum as f64 / a_c as f64,
                bbox: Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1),
            });
        }
    }
    areas
}
