use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use qslice::fixtures::{a4_auslander_gamma, kronecker, linear_a};
use qslice::zquiver::{build_window, double_slice, mutate_slice, Direction, MutationDir, Side, WindowKind, ZBase};
use qslice::{classify, n_slice_certify, preprojective_algebra, quadratic_dual, Bounds};

fn duality(c: &mut Criterion) {
    let gamma = a4_auslander_gamma();
    c.bench_function("quadratic_dual/a4-auslander", |b| b.iter(|| quadratic_dual(black_box(&gamma)).unwrap()));
    let a6 = linear_a(6);
    c.bench_function("quadratic_dual/a6", |b| b.iter(|| quadratic_dual(black_box(&a6)).unwrap()));
}

fn extension(c: &mut Criterion) {
    let bounds = Bounds::default();
    let gamma = a4_auslander_gamma();
    c.bench_function("preprojective/a4-auslander", |b| {
        b.iter(|| preprojective_algebra(black_box(&gamma), &bounds).unwrap())
    });
    c.bench_function("certify/a4-auslander", |b| b.iter(|| n_slice_certify(black_box(&gamma), &bounds).unwrap()));
}

fn homology(c: &mut Criterion) {
    let bounds = Bounds::default();
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    let gamma = a4_auslander_gamma();
    group.bench_function("a4-auslander", |b| b.iter(|| classify(black_box(&gamma), &bounds).unwrap()));
    let k3 = kronecker(3);
    group.bench_function("kronecker-3", |b| b.iter(|| classify(black_box(&k3), &bounds).unwrap()));
    group.finish();
}

fn zquiver(c: &mut Criterion) {
    let bounds = Bounds::default();
    let base = Arc::new(ZBase::from_gamma(&a4_auslander_gamma(), &bounds).unwrap());
    c.bench_function("window/-18..22", |b| {
        b.iter(|| build_window(base.clone(), WindowKind::FirstGrading, -18, 22).unwrap())
    });
    let w = build_window(base, WindowKind::FirstGrading, -18, 22).unwrap();
    let s = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
    let v = w.parse_vertex("(5,0)").unwrap();
    c.bench_function("mutate_slice", |b| {
        b.iter(|| mutate_slice(&w, black_box(&s), v, MutationDir::Plus, Side::Tau).unwrap())
    });
    c.bench_function("double_slice", |b| b.iter(|| double_slice(&w, black_box(&s), Direction::Forward).unwrap()));
}

criterion_group!(benches, duality, extension, homology, zquiver);
criterion_main!(benches);
