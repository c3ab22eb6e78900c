use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fudist_core::optimizer::{maximize_fu_with, Execution, OptimizerConfig};
use fudist_core::{random, zoo, BipartiteState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cases() -> Vec<(&'static str, BipartiteState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    vec![
        ("werner-3", zoo::werner(3, 0.2).unwrap()),
        ("pseudopure-4x4", zoo::pseudopure(&random::pure_state(&mut rng, 4, 4), 0.7).unwrap()),
        ("horodecki-a", zoo::horodecki_rho_a(0.5).unwrap()),
    ]
}

fn restarts(c: &mut Criterion) {
    let cfg = OptimizerConfig { restarts: 32, max_iterations: 500, ..OptimizerConfig::with_seed(7) };
    let mut group = c.benchmark_group("maximize_fu");
    group.sample_size(10);
    for (name, state) in cases() {
        group.bench_with_input(BenchmarkId::new("sequential", name), &state, |b, s| {
            b.iter(|| maximize_fu_with(black_box(s), &cfg, None, Execution::Sequential).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), &state, |b, s| {
            b.iter(|| maximize_fu_with(black_box(s), &cfg, None, Execution::Parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, restarts);
criterion_main!(benches);
