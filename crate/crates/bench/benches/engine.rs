use criterion::{black_box, criterion_group, criterion_main, Criterion};
use geo3_bench::{generic_walker, oracle_inputs};
use geo3_core::curvature::{parallel_cotton_system, CurvaturePack};
use geo3_core::numoracle::{compare, CompareOptions};

fn curvature_pack(c: &mut Criterion) {
    let m = generic_walker();
    c.bench_function("walker curvature pack", |b| b.iter(|| CurvaturePack::compute(black_box(&m))));
}

fn parallel_cotton(c: &mut Criterion) {
    let m = generic_walker();
    let mut g = c.benchmark_group("parallel cotton");
    g.sample_size(10);
    g.bench_function("system from opaque f", |b| b.iter(|| parallel_cotton_system(black_box(&m)).unwrap()));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let (m, funcs, nm, pts) = oracle_inputs(100);
    let opts = CompareOptions::default();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("100 points", |b| b.iter(|| compare(&m, &funcs, &nm, black_box(&pts), &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, curvature_pack, parallel_cotton, oracle);
criterion_main!(benches);
