use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use metasketch::graph::{generate_grid, generate_powerlaw};
use metasketch::{
    bfs_subgraph, bfs_vertex, build_metagraph, partition_balanced, pr_subgraph, pr_vertex, ClusterSpec,
    Graph, RunOptions, Strategy, DEFAULT_BALANCE_FACTOR, DEFAULT_DAMPING,
};

const SEED: u64 = 42;

fn graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("grid64", generate_grid(64, 64).unwrap()),
        ("powerlaw5k", generate_powerlaw(5000, 2, SEED).unwrap()),
    ]
}

fn cluster() -> ClusterSpec {
    ClusterSpec::new(2, 2).unwrap()
}

fn partitioning(c: &mut Criterion) {
    let mut group = c.benchmark_group("partition_balanced");
    group.sample_size(10);
    for (name, g) in graphs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| partition_balanced(black_box(g), 4, DEFAULT_BALANCE_FACTOR, SEED).unwrap())
        });
    }
    group.finish();
}

fn metagraph(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_metagraph");
    for (name, g) in graphs() {
        let layout = Strategy::Hp
            .apply(&g, cluster(), DEFAULT_BALANCE_FACTOR, SEED)
            .unwrap();
        group.bench_function(name, |b| {
            b.iter(|| build_metagraph(black_box(&g), &layout).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let opts = RunOptions::default();
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for (name, g) in graphs() {
        let layout = Strategy::Hp
            .apply(&g, cluster(), DEFAULT_BALANCE_FACTOR, SEED)
            .unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        group.bench_function(format!("bfs_vertex/{name}"), |b| {
            b.iter(|| bfs_vertex(&g, &layout, 0, &opts).unwrap())
        });
        group.bench_function(format!("bfs_subgraph/{name}"), |b| {
            b.iter(|| bfs_subgraph(&g, &layout, &mg, 0, &opts).unwrap())
        });
        group.bench_function(format!("pr_vertex/{name}"), |b| {
            b.iter(|| pr_vertex(&g, &layout, 10, DEFAULT_DAMPING, &opts).unwrap())
        });
        group.bench_function(format!("pr_subgraph/{name}"), |b| {
            b.iter(|| pr_subgraph(&g, &layout, &mg, 10, DEFAULT_DAMPING, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, partitioning, metagraph, simulation);
criterion_main!(benches);
