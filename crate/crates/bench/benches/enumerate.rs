use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbe_bench::corpus;
use mbe_core::{enumerate, gen_crown, CountSink, EnumConfig, IeMode, Tier};

fn tiers(c: &mut Criterion) {
    let mut group = c.benchmark_group("tiers");
    group.sample_size(20);
    for (label, g) in corpus() {
        for tier in Tier::ALL {
            group.bench_with_input(BenchmarkId::new(tier.name(), &label), &g, |b, g| {
                b.iter(|| {
                    let mut sink = CountSink::default();
                    enumerate(black_box(g), &EnumConfig::new(tier), &mut sink);
                    sink.count
                })
            });
        }
    }
    group.finish();
}

fn ie_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("ie");
    group.sample_size(20);
    let (label, g) = corpus().swap_remove(2);
    for mode in IeMode::ALL {
        group.bench_with_input(BenchmarkId::new(mode.name(), &label), &g, |b, g| {
            b.iter(|| {
                let mut sink = CountSink::default();
                enumerate(black_box(g), &EnumConfig::new(Tier::Ips).with_ie(mode), &mut sink);
                sink.count
            })
        });
    }
    group.finish();
}

fn crown_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("crown_batch");
    for half in [10usize, 14, 18] {
        let g = gen_crown(half).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(half), &g, |b, g| {
            b.iter(|| {
                let mut sink = CountSink::default();
                enumerate(black_box(g), &EnumConfig::new(Tier::Ips), &mut sink);
                sink.count
            })
        });
    }
    group.finish();
}

criterion_group!(benches, tiers, ie_modes, crown_batch);
criterion_main!(benches);
