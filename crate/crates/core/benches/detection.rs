//! Throughput comparison: fraud-rule evaluation and corpus runs, parallel
//! across apps vs. strictly sequential.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use adscan_core::adview::AdFeatureConfig;
use adscan_core::corpus::{
    run_graphs, run_graphs_sequential, run_models, run_models_sequential, PipelineConfig,
};
use adscan_core::fixtures;
use adscan_core::model::UTGraph;
use adscan_core::rules::{check_all, RuleConfig};
use adscan_core::sim::{default_distribution, generate_benchmark};

fn bench_check_all(c: &mut Criterion) {
    let graph = fixtures::big_graph(100, 20);
    let rules = RuleConfig::default();
    let ads = AdFeatureConfig::default();
    c.bench_function("check_all/100-state-2000-view", |b| {
        b.iter(|| check_all(black_box(&graph), &rules, &ads).unwrap())
    });
}

fn bench_corpus(c: &mut Criterion) {
    let models = generate_benchmark(50, 50, &default_distribution(), 1).unwrap();
    let cfg = PipelineConfig::default();

    let mut group = c.benchmark_group("corpus-100-apps");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || models.clone(),
            |m| run_models_sequential(black_box(&m), &cfg),
            BatchSize::LargeInput,
        )
    });
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || models.clone(),
            |m| run_models(black_box(&m), &cfg, 0),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn bench_graph_corpus(c: &mut Criterion) {
    // Heavier per-app work: 32 large pre-built graphs.
    let graphs: Vec<UTGraph> = (0..32).map(|_| fixtures::big_graph(100, 20)).collect();
    let cfg = PipelineConfig::default();

    let mut group = c.benchmark_group("graph-corpus-32x100-states");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| run_graphs_sequential(black_box(&graphs), &cfg))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| run_graphs(black_box(&graphs), &cfg, 0))
    });
    group.finish();
}

criterion_group!(benches, bench_check_all, bench_corpus, bench_graph_corpus);
criterion_main!(benches);
