use std::hint::black_box;
use std::sync::Arc;

use covariant_lab::heisenberg::fsb_transform;
use covariant_lab::su11::hardy_transform;
use covariant_lab::uncertainty::{minimal_state_solve, observable_d, observable_m};
use covariant_lab::{DiskGeometry, RealGrid};
use covariant_lab_bench::{circle_signal, line_signal, standard_params};
use criterion::{criterion_group, criterion_main, Criterion};

fn fsb(c: &mut Criterion) {
    let p = standard_params();
    let v = line_signal();
    let mut group = c.benchmark_group("fsb_transform");
    group.sample_size(10);
    for n in [129, 257] {
        let grid = RealGrid::symmetric(4.0, n).unwrap();
        group.bench_function(format!("{n}x{n}"), |b| b.iter(|| fsb_transform(black_box(&v), &p, &grid, &grid).unwrap()));
    }
    group.finish();
}

fn hardy(c: &mut Criterion) {
    let geometry = Arc::new(DiskGeometry::default());
    let mut group = c.benchmark_group("hardy_transform");
    for n in [256, 1024] {
        let f = circle_signal(n);
        group.bench_function(format!("n{n}"), |b| b.iter(|| hardy_transform(black_box(&f), &geometry).unwrap()));
    }
    group.finish();
}

fn minimal_state(c: &mut Criterion) {
    let p = standard_params();
    let r = 1.0 / (2.0 * std::f64::consts::PI);
    let mut group = c.benchmark_group("minimal_state_solve");
    group.sample_size(10);
    for n in [129, 257] {
        let grid = RealGrid::symmetric(4.0, n).unwrap();
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| minimal_state_solve(&observable_m(), &observable_d(p), black_box(r), &grid).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fsb, hardy, minimal_state);
criterion_main!(benches);
