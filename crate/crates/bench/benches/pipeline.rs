use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rankgain_bench::{curve, prime};
use rankgain_core::elliptic::{count_points, reduce_curve};
use rankgain_core::search::{calibrate, density_scan, fast_split_test, split_type_at};
use rankgain_core::{make_certificate, verify_certificate, QuadFieldDesc};

fn point_counting(c: &mut Criterion) {
    let e = curve(-3, 2, -5);
    let mut group = c.benchmark_group("count_points");
    for p in [103u64, 1009, 10009] {
        let reduced = reduce_curve(&e, &prime(-3, p)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &reduced, |b, r| {
            b.iter(|| count_points(black_box(r)).unwrap())
        });
    }
    group.finish();
}

fn split_tests(c: &mut Criterion) {
    calibrate().unwrap();
    let k = QuadFieldDesc::eisenstein();
    let e = curve(-3, 0, 1);
    let at = prime(-3, 1009);
    let mut group = c.benchmark_group("split_test");
    for n in [2u32, 3, 6] {
        let param = k.int(5);
        group.bench_with_input(BenchmarkId::new("oracle", n), &n, |b, &n| {
            b.iter(|| split_type_at(&e, n, black_box(&param), &at).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fast", n), &n, |b, &n| {
            b.iter(|| fast_split_test(&e, n, black_box(&param), &at).unwrap())
        });
    }
    group.finish();
}

fn density(c: &mut Criterion) {
    let e = curve(-3, 0, 1);
    let at = prime(-3, 1009);
    let mut group = c.benchmark_group("density_scan");
    group.sample_size(10);
    for workers in [1usize, 4] {
        group.bench_with_input(BenchmarkId::new("n3", workers), &workers, |b, &w| {
            b.iter(|| density_scan(&e, 3, &at, w).unwrap())
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let k = QuadFieldDesc::eisenstein();
    let e = curve(-3, 0, 1);
    let mut group = c.benchmark_group("certificate");
    group.sample_size(10);
    group.bench_function("make_n3", |b| {
        b.iter(|| make_certificate(&e, 3, black_box(&k.int(1))).unwrap())
    });
    let cert = make_certificate(&e, 3, &k.int(1)).unwrap();
    group.bench_function("verify_n3", |b| b.iter(|| verify_certificate(black_box(&cert))));
    group.bench_function("make_n6", |b| {
        b.iter(|| make_certificate(&e, 6, black_box(&k.int(2))).unwrap())
    });
    group.finish();
}

criterion_group!(benches, point_counting, split_tests, density, certificates);
criterion_main!(benches);
