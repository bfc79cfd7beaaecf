use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use depthseg::{build_histogram, detect_intervals, locate_driver, segment_frame, GrowthParams, SegmentationParams};
use depthseg_bench::{cabin_frame, reach_session};

fn segmentation(c: &mut Criterion) {
    let frame = cabin_frame();
    let seg = SegmentationParams::default();
    let growth = GrowthParams::default();
    let hist = build_histogram(&frame).unwrap();

    c.bench_function("histogram 640x480", |b| b.iter(|| build_histogram(black_box(&frame))));
    c.bench_function("detect_intervals", |b| {
        b.iter(|| detect_intervals(black_box(&hist), &seg))
    });
    c.bench_function("segment_frame 640x480", |b| {
        b.iter(|| segment_frame(black_box(&frame), &seg, &growth))
    });
    c.bench_function("locate_driver 640x480", |b| {
        b.iter(|| locate_driver(black_box(&frame), &seg, &growth, &Default::default()))
    });
}

fn monitoring(c: &mut Criterion) {
    let (frames, tracker) = reach_session();
    // frame 45 is mid-reach, so the step labels a real changed area
    let busy = &frames[45];
    c.bench_function("monitor step (reach)", |b| {
        b.iter_batched(
            || tracker.clone(),
            |mut t| t.step(45, black_box(busy)),
            criterion::BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, segmentation, monitoring);
criterion_main!(benches);
