use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cremona_bench::{deficient_matrix, dense_form, quartic};

fn poly_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_mul");
    for d in [2u32, 4, 6] {
        let (f, h) = (dense_form(5, d), dense_form(5, d));
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| b.iter(|| black_box(&f).mul(black_box(&h)).unwrap()));
    }
    g.finish();
}

fn kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    g.sample_size(20);
    for n in [8usize, 16, 32] {
        let m = deficient_matrix(n, 4);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| black_box(&m).kernel()));
    }
    g.finish();
}

fn substitute(c: &mut Criterion) {
    let mut g = c.benchmark_group("substitute");
    let forms = quartic().forms().to_vec();
    for d in [2u32, 4, 6] {
        let f = dense_form(4, d);
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| b.iter(|| black_box(&f).substitute(&forms).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, poly_mul, kernel, substitute);
criterion_main!(benches);
