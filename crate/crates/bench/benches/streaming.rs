use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use samplestream::streaming::greedy_offline;
use samplestream::{sample_streaming, AlgoConfig, Instance, QueryLedger};
use samplestream_bench::{b_matching, coverage, logdet};

fn stream(instance: &Instance, config: &AlgoConfig) -> usize {
    sample_streaming(
        &instance.stream,
        &instance.matchoid,
        instance.objective.as_ref(),
        config,
    )
    .unwrap()
    .solution
    .len()
}

fn by_q(c: &mut Criterion) {
    let instance = coverage(2000, 20);
    let mut group = c.benchmark_group("coverage_n2000_k20");
    group.throughput(Throughput::Elements(instance.n() as u64));
    for q in [1.0, 0.5, 1.0 / 3.0, 0.1] {
        let config = AlgoConfig::custom(1.0, q).unwrap().with_seed(7);
        group.bench_with_input(
            BenchmarkId::new("q", format!("{q:.3}")),
            &config,
            |b, config| b.iter(|| stream(black_box(&instance), config)),
        );
    }
    group.finish();
}

fn by_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("b_matching_monotone_preset");
    for edges in [200, 800, 3200] {
        let instance = b_matching(edges / 4, edges, 2);
        let config = AlgoConfig::monotone_preset(instance.matchoid.p())
            .unwrap()
            .with_seed(3);
        group.throughput(Throughput::Elements(edges as u64));
        group.bench_with_input(
            BenchmarkId::from_parameter(edges),
            &instance,
            |b, instance| b.iter(|| stream(black_box(instance), &config)),
        );
    }
    group.finish();
}

fn logdet_stream(c: &mut Criterion) {
    let instance = logdet(150, 10);
    let config = AlgoConfig::nonmonotone_preset(1).unwrap().with_seed(5);
    c.bench_function("logdet_n150_k10", |b| {
        b.iter(|| stream(black_box(&instance), &config))
    });
}

fn versus_greedy(c: &mut Criterion) {
    let instance = coverage(300, 10);
    let mut group = c.benchmark_group("coverage_n300_k10");
    let config = AlgoConfig::monotone_preset(1).unwrap().with_seed(1);
    group.bench_function("sample", |b| {
        b.iter(|| stream(black_box(&instance), &config))
    });
    group.bench_function("greedy", |b| {
        b.iter(|| {
            greedy_offline(
                &instance.matchoid,
                instance.objective.as_ref(),
                &mut QueryLedger::new(),
            )
            .unwrap()
            .len()
        })
    });
    group.finish();
}

criterion_group!(benches, by_q, by_size, logdet_stream, versus_greedy);
criterion_main!(benches);
