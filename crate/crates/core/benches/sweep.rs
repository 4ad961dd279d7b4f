use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coexsim::engine;
use coexsim::experiment::{run_experiment, Execution, ExperimentSpec};

fn small_sweep() -> ExperimentSpec {
    let mut spec = ExperimentSpec::reference();
    spec.base.frame.horizon_frames = 2_000;
    spec.replications = 2;
    spec.sweep.b2_fractions = vec![0.2, 0.4, 0.6, 0.8];
    spec
}

fn sweep(c: &mut Criterion) {
    let spec = small_sweep();
    let threads = std::thread::available_parallelism().map_or(2, |n| n.get());
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel { threads }),
    ] {
        group.bench_with_input(BenchmarkId::new(name, threads), &exec, |b, &exec| {
            b.iter(|| run_experiment(black_box(&spec), exec).unwrap())
        });
    }
    group.finish();
}

fn single_run(c: &mut Criterion) {
    let mut cfg = ExperimentSpec::reference().base;
    cfg.frame.horizon_frames = 10_000;
    c.bench_function("run/frame-based/1e5-slots", |b| {
        b.iter(|| engine::run(black_box(&cfg)).unwrap())
    });
}

criterion_group!(benches, sweep, single_run);
criterion_main!(benches);
