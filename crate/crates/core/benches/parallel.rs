//! Pooled versus single-threaded execution of the parallel kernels.
//!
//! Built with `--no-default-features` both arms run the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mfbv::disc::{self, ModulusFilter, QRange, Samples, Variant};
use mfbv::multfn::MultFn;
use mfbv::par;
use mfbv::ramare::{self, FSpec, RamareParams};

fn bv(c: &mut Criterion) {
    let x = 100_000;
    let f = Samples::new(&MultFn::mobius(), x).unwrap();
    let mut group = c.benchmark_group("bv_average");
    group.sample_size(10);
    for threads in [1usize, 0] {
        let label = if threads == 1 { "single" } else { "pool" };
        group.bench_with_input(BenchmarkId::new(label, x), &threads, |b, &t| {
            b.iter(|| {
                par::with_threads(t, || {
                    disc::bv_average(&f, x, QRange::dyadic(200), &Variant::Plain, ModulusFilter::All, 12).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn bilinear(c: &mut Criterion) {
    let x = 100_000;
    let f = Samples::new(&MultFn::liouville(), x).unwrap();
    let spec = FSpec::extremal(&f, x, QRange::dyadic(60), 12).unwrap();
    let big_f = ramare::build_f(&spec).unwrap();
    let mut params = RamareParams::new(10.0, 30.0).unwrap();
    params.restrict_main = false;
    let mut group = c.benchmark_group("ramare_decompose");
    group.sample_size(10);
    for threads in [1usize, 0] {
        let label = if threads == 1 { "single" } else { "pool" };
        group.bench_with_input(BenchmarkId::new(label, x), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || ramare::decompose(&f, &big_f, x, params).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bv, bilinear);
criterion_main!(benches);
