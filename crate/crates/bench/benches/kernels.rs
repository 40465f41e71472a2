//! Hot paths, measured in isolation: one tensor contraction per depth,
//! one local-search solve, one neighbourhood tally, one canonical key.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cutbench_core::graph::{
    anchored_regular_tree, canonical_key_capped, generate_regular, tally_subgraphs,
};
use cutbench_core::solvers::flip_solve;
use cutbench_core::tensor::{QaoaAngles, SubgraphEvaluator};
use cutbench_core::EngineConfig;

fn tree_contraction(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let mut group = c.benchmark_group("tree-contraction");
    group.sample_size(10);
    for p in [1u32, 2, 3] {
        let angles = QaoaAngles::new(vec![0.5; p as usize], vec![0.3; p as usize]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| {
                let eval = SubgraphEvaluator::new(anchored_regular_tree(3, p), p, &cfg).unwrap();
                eval.edge_value(&angles, &cfg).unwrap()
            })
        });
    }
    group.finish();
}

fn flip_local_search(c: &mut Criterion) {
    let g = generate_regular(1000, 3, 17).unwrap();
    c.bench_function("flip-n1000", |b| {
        let mut restart = 0u64;
        b.iter(|| {
            restart += 1;
            flip_solve(&g, restart)
        })
    });
}

fn neighbourhood_tally(c: &mut Criterion) {
    let g = generate_regular(256, 3, 23).unwrap();
    c.bench_function("tally-n256-p2", |b| b.iter(|| tally_subgraphs(&g, 2, 64).unwrap()));
}

fn canonical_key(c: &mut Criterion) {
    let ball = anchored_regular_tree(3, 2);
    c.bench_function("canon-tree-p2", |b| {
        b.iter(|| canonical_key_capped(&ball, 64).unwrap())
    });
}

criterion_group!(
    kernels,
    tree_contraction,
    flip_local_search,
    neighbourhood_tally,
    canonical_key
);
criterion_main!(kernels);
