use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpa_core::corpus::run_corpus;
use lpa_core::parallel::Mode;

fn corpus(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    for count in [100, 400] {
        for (name, mode) in [("parallel", Mode::Parallel), ("sequential", Mode::Sequential)] {
            group.bench_with_input(BenchmarkId::new(name, count), &count, |b, &n| {
                b.iter(|| run_corpus(n, 7, true, 4, mode))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, corpus);
criterion_main!(benches);
