use depthseg::motion::*;
use depthseg::synth::{gen_sequence, presets, SequenceGenerator};
use depthseg::*;
use petgraph::unionfind::UnionFind;
use proptest::prelude::*;

fn diff_from(width: usize, height: usize, delta: Vec<i32>, current: Vec<u16>, epsilon: u16) -> DiffImage {
    DiffImage {
        width,
        height,
        valid: current.iter().map(|&c| c > 0).collect(),
        delta,
        current,
        epsilon,
    }
}

fn random_diff() -> impl Strategy<Value = (DiffImage, usize)> {
    (4usize..40, 4usize..40, 1usize..6)
        .prop_flat_map(|(w, h, cell)| {
            (
                Just(w),
                Just(h),
                Just(cell),
                proptest::collection::vec(prop_oneof![3 => -20i32..20, 1 => -400i32..400], w * h),
                proptest::collection::vec(prop_oneof![1 => Just(0u16), 9 => 500u16..3000], w * h),
            )
        })
        .prop_map(|(w, h, cell, delta, current)| (diff_from(w, h, delta, current, 50), cell))
}

// Components by union-find over grid cells, then the same size filter.
fn oracle_components(grid: &CellGrid, diff: &DiffImage, conn: Connectivity) -> Vec<(usize, usize)> {
    let (cols, rows) = (grid.cols, grid.rows);
    let mut uf = UnionFind::<usize>::new(cols * rows);
    for (x, y) in grid.changed.iter_set() {
        for &(dx, dy) in conn.offsets() {
            let (nx, ny) = (x as isize + dx, y as isize + dy);
            if nx >= 0
                && ny >= 0
                && (nx as usize) < cols
                && (ny as usize) < rows
                && grid.changed.get(nx as usize, ny as usize)
            {
                uf.union(y * cols + x, ny as usize * cols + nx as usize);
            }
        }
    }
    let mut by_root = std::collections::BTreeMap::<usize, (usize, usize)>::new();
    for (x, y) in grid.changed.iter_set() {
        let e = by_root.entry(uf.find(y * cols + x)).or_insert((0, 0));
        e.0 += 1;
    }
    for y in 0..diff.height {
        for x in 0..diff.width {
            let i = y * diff.width + x;
            let (cx, cy) = (x / grid.cell, y / grid.cell);
            if diff.is_changed(i) && grid.changed.get(cx, cy) {
                by_root.get_mut(&uf.find(cy * cols + cx)).unwrap().1 += 1;
            }
        }
    }
    let mut out: Vec<(usize, usize)> = by_root
        .into_values()
        .filter(|&(_, a_c)| a_c >= grid.cell * grid.cell)
        .collect();
    out.sort_unstable();
    out
}

proptest! {
    #[test]
    fn components_match_union_find((diff, cell) in random_diff(), eight: bool) {
        let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
        let cfg = TrackerConfig { grid_cell: cell, ..Default::default() };
        let grid = downsample_max(&diff, &cfg);
        let areas = connected_components(&grid, &diff, conn);
        let mut got: Vec<(usize, usize)> = areas.iter().map(|a| (a.mask.count(), a.a_c)).collect();
        got.sort_unstable();
        prop_assert_eq!(got, oracle_components(&grid, &diff, conn));
        let total: usize = areas.iter().map(|a| a.a_c).sum();
        prop_assert!(total <= diff.changed_count());
        for (i, a) in areas.iter().enumerate() {
            for b in &areas[i + 1..] {
                prop_assert!(a.mask.is_disjoint(&b.mask));
            }
        }
    }

    #[test]
    fn pooled_cells_hold_their_maximum((diff, cell) in random_diff()) {
        let cfg = TrackerConfig { grid_cell: cell, ..Default::default() };
        let grid = downsample_max(&diff, &cfg);
        for cy in 0..grid.rows {
            for cx in 0..grid.cols {
                let r = grid.cell_rect(cx, cy, diff.width, diff.height);
                let max = (r.y..r.bottom())
                    .flat_map(|y| (r.x..r.right()).map(move |x| (x, y)))
                    .map(|(x, y)| y * diff.width + x)
                    .filter(|&i| diff.valid[i])
                    .map(|i| diff.delta[i].unsigned_abs())
                    .max()
                    .unwrap_or(0);
                prop_assert_eq!(grid.values[cy * grid.cols + cx], max);
            }
        }
    }

    #[test]
    fn d_changed_lies_within_changed_depths((diff, cell) in random_diff()) {
        let cfg = TrackerConfig { grid_cell: cell, ..Default::default() };
        let grid = downsample_max(&diff, &cfg);
        for a in connected_components(&grid, &diff, Connectivity::Eight) {
            let depths: Vec<u16> = (0..diff.delta.len())
                .filter(|&i| diff.is_changed(i) && a.mask.get((i % diff.width) / cell, (i / diff.width) / cell))
                .map(|i| diff.current[i])
                .collect();
            prop_assert_eq!(depths.len(), a.a_c);
            let mean = depths.iter().map(|&d| d as f64).sum::<f64>() / depths.len() as f64;
            prop_assert!((a.d_changed - mean).abs() < 1e-9);
        }
    }

    #[test]
    fn gray_dead_band(delta in -70000i32..70000, valid: bool) {
        let cfg = TrackerConfig::default();
        let g = gray_level(delta, valid, &cfg);
        prop_assert!(g <= 100 || g >= 150);
        if valid {
            prop_assert_eq!(g >= 150, delta.unsigned_abs() > cfg.diff_epsilon as u32);
        }
    }
}

#[test]
fn gray_boundaries() {
    let cfg = TrackerConfig::default();
    assert_eq!(gray_level(0, true, &cfg), 0);
    assert_eq!(gray_level(50, true, &cfg), 100);
    assert_eq!(gray_level(-50, true, &cfg), 100);
    assert_eq!(gray_level(51, true, &cfg), 150);
    assert_eq!(gray_level(1000, true, &cfg), 255);
    assert_eq!(gray_level(9000, true, &cfg), 255);
}

#[test]
fn changed_area_and_depth_exact() {
    assert_eq!(a_changed(1500, 10_000), 15.0);
    let diff = diff_from(2, 1, vec![900, -900], vec![1000, 2000], 50);
    let cfg = TrackerConfig {
        grid_cell: 1,
        ..Default::default()
    };
    let areas = connected_components(&downsample_max(&diff, &cfg), &diff, Connectivity::Eight);
    assert_eq!(areas.len(), 1);
    assert_eq!(areas[0].a_c, 2);
    assert_eq!(areas[0].d_changed, 1500.0);
}

fn cabin_tracker(seed: u64) -> (SequenceGenerator, MotionTracker) {
    let gen = SequenceGenerator::new(presets::reach_sequence(seed)).unwrap();
    let (f0, _) = gen.frame(0);
    let driver = locate_driver(&f0, &Default::default(), &Default::default(), &Default::default()).unwrap();
    let reference = set_reference(&f0, &driver).unwrap();
    (gen, MotionTracker::new(reference, Default::default()).unwrap())
}

#[test]
fn reference_area_matches_driver_oracle() {
    let (gen, tracker) = cabin_tracker(2);
    let oracle = gen.base_oracle();
    let truth = &oracle.blob_masks[presets::CABIN_DRIVER];
    assert_eq!(tracker.reference().window, presets::CABIN_DRIVER_BBOX);
    assert_eq!(tracker.reference().a_r, oracle.blob_counts[presets::CABIN_DRIVER]);
    assert_eq!(
        tracker.reference().driver_mask,
        truth.crop(presets::CABIN_DRIVER_BBOX).unwrap()
    );
}

#[test]
fn reach_measures_oracle_change_and_alerts_once() {
    let (gen, mut tracker) = cabin_tracker(3);
    let mut alerts = Vec::new();
    let mut previous = 0.0;
    for t in 0..gen.frame_count() {
        let (frame, oracle) = gen.frame(t);
        let step = tracker.step(t, &frame).unwrap();
        let total: usize = step.report.areas.iter().map(|a| a.a_c).sum();
        if (30..60).contains(&t) {
            // arm depth moves by >= 100 mm against everything it covers
            assert_eq!(total, oracle.changed_count, "frame {t}");
            assert!(step.report.a_changed_total >= previous);
            previous = step.report.a_changed_total;
        } else {
            assert_eq!(total, 0, "frame {t}");
        }
        alerts.extend(step.alert);
    }
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0].onset_frame, 30);
    assert_eq!(alerts[0].frame_index, 34);
}

#[test]
fn static_sequence_never_alerts() {
    let (frames, _) = gen_sequence(&presets::static_sequence(4, 60)).unwrap();
    let driver = locate_driver(
        &frames[0],
        &Default::default(),
        &Default::default(),
        &Default::default(),
    )
    .unwrap();
    let mut tracker = MotionTracker::new(set_reference(&frames[0], &driver).unwrap(), Default::default()).unwrap();
    for (t, f) in frames.iter().enumerate() {
        let step = tracker.step(t, f).unwrap();
        assert!(step.alert.is_none());
        assert!(step.report.areas.is_empty());
    }
}
