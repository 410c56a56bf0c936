use std::f64::consts::PI;
use std::hint::black_box;

use beamsign::greens::{greens_constant, greens_discrete};
use beamsign::principles::verify_batch;
use beamsign::{Execution, Grid, Interval, ProblemSpec, ScalarField};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn grid(n: usize) -> Grid {
    Grid::new(Interval::unit(), n).unwrap()
}

fn bench_greens_discrete(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("greens_discrete");
    for n in [200, 400] {
        let c = ScalarField::from_fn(&grid(n), |t| 300.0 * (PI * t).sin()).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &c, |b, c| {
                b.iter(|| greens_discrete(1.0, black_box(c), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_greens_series(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("greens_constant");
    group.sample_size(20);
    let g = grid(100);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| greens_constant(1.0, 300.0, black_box(&g), 400, exec).unwrap()));
    }
    group.finish();
}

fn bench_verify_batch(cr: &mut Criterion) {
    let g = grid(400);
    let problems: Vec<ProblemSpec> = (0..64)
        .map(|k| {
            let level = -900.0 + 30.0 * k as f64;
            let c = ScalarField::from_fn(&g, |t| level + 50.0 * (PI * t).sin().powi(2)).unwrap();
            let h = ScalarField::from_fn(&g, |t| 1.0 + t).unwrap();
            ProblemSpec::homogeneous(0.5, c, h).unwrap()
        })
        .collect();
    let mut group = cr.benchmark_group("verify_batch");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| verify_batch(black_box(&problems), exec)));
    }
    group.finish();
}

criterion_group!(benches, bench_greens_discrete, bench_greens_series, bench_verify_batch);
criterion_main!(benches);
