use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use odd_ramsey::exact::{exists_valid_coloring, Pruning, SearchConfig};
use odd_ramsey::matcher::{run_matcher, MatcherConfig};
use odd_ramsey::odd::find_bad_target;
use odd_ramsey::tiles::{GraphTileConfig, HyperTileConfig, TileSystem};
use odd_ramsey::HostInstance;

fn verifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    for n in [8, 12, 16] {
        let sys = TileSystem::Graph(GraphTileConfig::new(n, 2).unwrap());
        let coloring = run_matcher(&sys, MatcherConfig { seed: 1, ..MatcherConfig::default() }).unwrap().coloring;
        group.bench_with_input(BenchmarkId::new("graph-t2", n), &coloring, |b, col| {
            b.iter(|| find_bad_target(black_box(col)).unwrap())
        });
    }
    group.finish();
}

fn matcher(c: &mut Criterion) {
    let mut group = c.benchmark_group("matcher");
    group.sample_size(20);
    for n in [8, 12] {
        let graph = TileSystem::Graph(GraphTileConfig::new(n, 2).unwrap());
        group.bench_with_input(BenchmarkId::new("graph-t2", n), &graph, |b, sys| {
            b.iter(|| run_matcher(sys, MatcherConfig { seed: 7, ..MatcherConfig::default() }).unwrap())
        });
        let hyper = TileSystem::Hyper(HyperTileConfig::new(n, 2).unwrap());
        group.bench_with_input(BenchmarkId::new("hyper-k2", n), &hyper, |b, sys| {
            b.iter(|| run_matcher(sys, MatcherConfig { seed: 7, ..MatcherConfig::default() }).unwrap())
        });
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    for (n, q) in [(3, 2), (3, 3), (4, 2)] {
        for pruning in [Pruning::ColorCanonical, Pruning::Full] {
            let config = SearchConfig::new(HostInstance::bipartite(n, 2).unwrap(), q).with_pruning(pruning);
            group.bench_with_input(BenchmarkId::new(format!("{pruning:?}"), format!("n{n}-q{q}")), &config, |b, cfg| {
                b.iter(|| exists_valid_coloring(cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verifier, matcher, exact);
criterion_main!(benches);
