use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use iis_core::arith::{build_number_field, isolate_real_roots, IntPoly};
use iis_core::engine::{run_induction, Side, StopWhen};
use iis_core::thin::{thin_eigen_params, verify_self_similarity, M_ENTRIES};
use iis_core::{build_special_symmetric, symmetrize, verify_theorem1};

fn bench_symmetrize(c: &mut Criterion) {
    let systems: Vec<_> = iis_bench::samples(7, 100)
        .iter()
        .map(|p| build_special_symmetric(p).unwrap())
        .collect();
    c.bench_function("symmetrize 100 samples", |b| {
        b.iter(|| {
            for s in &systems {
                let _ = black_box(symmetrize(s));
            }
        })
    });
    let params = iis_bench::samples(7, 100);
    c.bench_function("dual route 100 samples", |b| {
        b.iter(|| {
            for p in &params {
                let _ = black_box(verify_theorem1(p));
            }
        })
    });
}

fn bench_thin(c: &mut Criterion) {
    let p = thin_eigen_params();
    let s = build_special_symmetric(&p).unwrap();
    c.bench_function("thin self-similarity", |b| b.iter(|| black_box(verify_self_similarity(&p))));
    c.bench_function("thin 60 iterations", |b| {
        b.iter(|| black_box(run_induction(&s, Side::Right, 60, StopWhen::HoleOnly)))
    });
}

fn bench_roots(c: &mut Criterion) {
    let poly = IntPoly::from_i64s(&[1, -4, 0, 1]);
    c.bench_function("isolate t^3 - 4t + 1", |b| b.iter(|| black_box(isolate_real_roots(&poly).unwrap())));
    c.bench_function("number field from M", |b| b.iter(|| black_box(build_number_field(&M_ENTRIES).unwrap())));
}

criterion_group!(benches, bench_symmetrize, bench_thin, bench_roots);
criterion_main!(benches);
