use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use drlpart::coarsen::coarsening_chain;
use drlpart::edge::{edge_separator, CoarseSolver, MultilevelConfig, Refiner};
use drlpart::io::generate_delaunay;
use drlpart::nn::Matrix;
use drlpart::ordering::{
    minimum_degree, nested_dissection, symbolic_fill, GreedySeparator, Permutation, SparsePattern,
};
use drlpart::vertex::vertex_separator;
use drlpart::{Agent, TaskKind};

fn generation(c: &mut Criterion) {
    c.bench_function("delaunay 5000", |b| {
        b.iter(|| generate_delaunay(black_box(5000), 1).unwrap())
    });
}

fn coarsening(c: &mut Criterion) {
    let g = generate_delaunay(5000, 2).unwrap();
    c.bench_function("coarsening chain 5000", |b| {
        b.iter(|| coarsening_chain(black_box(&g), 100, 0))
    });
}

fn agent_forward(c: &mut Criterion) {
    let g = generate_delaunay(2000, 3).unwrap();
    for kind in [TaskKind::Edge, TaskKind::Vertex, TaskKind::Coarse] {
        let agent = Agent::new(kind, 0);
        let f = Matrix::from_vec(g.n(), kind.channels(), vec![0.5; g.n() * kind.channels()]);
        let mask = vec![false; g.n()];
        c.bench_function(&format!("{} forward 2000", kind.name()), |b| {
            b.iter_batched(
                || f.clone(),
                |f| agent.evaluate(&g, f, &mask, true).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
}

fn partitioning(c: &mut Criterion) {
    let g = generate_delaunay(5000, 4).unwrap();
    let cfg = MultilevelConfig::default();
    let edge = Agent::new(TaskKind::Edge, 0);
    let vertex = Agent::new(TaskKind::Vertex, 0);
    let mut group = c.benchmark_group("multilevel 5000");
    group.sample_size(10);
    group.bench_function("edge agent", |b| {
        b.iter(|| edge_separator(&g, &cfg, Refiner::Agent(&edge), CoarseSolver::Fallback).unwrap())
    });
    group.bench_function("edge greedy", |b| {
        b.iter(|| edge_separator(&g, &cfg, Refiner::Greedy, CoarseSolver::Fallback).unwrap())
    });
    group.bench_function("vertex agent", |b| {
        b.iter(|| {
            vertex_separator(&g, &cfg, Refiner::Agent(&vertex), CoarseSolver::Fallback).unwrap()
        })
    });
    group.finish();
}

fn ordering(c: &mut Criterion) {
    let g = generate_delaunay(5000, 5).unwrap();
    let a = SparsePattern::from_graph(&g);
    let provider = GreedySeparator::default();
    let nd = nested_dissection(&g, 100, &provider);
    let mut group = c.benchmark_group("ordering 5000");
    group.sample_size(10);
    group.bench_function("minimum degree", |b| {
        b.iter(|| minimum_degree(black_box(&g)))
    });
    group.bench_function("nested dissection greedy", |b| {
        b.iter(|| nested_dissection(&g, 100, &provider))
    });
    group.bench_function("symbolic fill nd", |b| {
        b.iter(|| symbolic_fill(&a, &nd).unwrap())
    });
    group.bench_function("symbolic fill natural", |b| {
        b.iter(|| symbolic_fill(&a, &Permutation::identity(g.n())).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    generation,
    coarsening,
    agent_forward,
    partitioning,
    ordering
);
criterion_main!(benches);
