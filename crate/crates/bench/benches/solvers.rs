use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rideshare_bench::{stop_gadget, tree};
use rideshare_core::relation::build_compatibility_digraph;
use rideshare_core::{
    build_meta_graph, edge_swap, exact_min_drivers, label_nodes, solve_phases, star_improve,
    OracleBudget,
};

fn phases(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_phases");
    for n in [100, 1000, 5000] {
        let inst = tree(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve_phases(black_box(inst)).unwrap())
        });
    }
    group.finish();
}

fn meta_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("meta_graph");
    for n in [100, 1000] {
        let inst = tree(n, 7);
        let dg = build_compatibility_digraph(&inst).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(inst, dg), |b, (inst, dg)| {
            b.iter(|| build_meta_graph(black_box(inst), black_box(dg)).and_then(label_nodes).unwrap())
        });
    }
    group.finish();
}

fn local_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("local_search");
    group.measurement_time(Duration::from_secs(10));
    for n in [20, 60] {
        let inst = tree(n, 7);
        group.bench_with_input(BenchmarkId::new("star_improve", n), &inst, |b, inst| {
            b.iter(|| star_improve(black_box(inst)))
        });
        for k in [1, 2] {
            group.bench_with_input(BenchmarkId::new(format!("edge_swap_k{k}"), n), &inst, |b, inst| {
                b.iter(|| edge_swap(black_box(inst), k))
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let inst = stop_gadget(2);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("stop_gadget_r2", |b| {
        b.iter(|| exact_min_drivers(black_box(&inst), OracleBudget::structured()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, phases, meta_graph, local_search, oracle);
criterion_main!(benches);
