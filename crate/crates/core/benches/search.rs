use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use paracomp::action::builtin::{f2_boundary, free_boundary};
use paracomp::comparison::{SearchBounds, SearchContext};
use paracomp::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn paradoxical(c: &mut Criterion) {
    let act = f2_boundary();
    let bounds = SearchBounds::new(3, 4, 1_000_000).unwrap();
    let a = act.space().parse_set("[ab]").unwrap();
    let mut group = c.benchmark_group("check_paradoxical");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "f2 [ab]"), |b| {
            b.iter(|| {
                SearchContext::new(&act, bounds)
                    .unwrap()
                    .with_execution(exec)
                    .check_paradoxical(&a)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn filling(c: &mut Criterion) {
    let act = free_boundary(3).unwrap();
    let bounds = SearchBounds::new(3, 3, 1_000_000).unwrap();
    let mut group = c.benchmark_group("check_n_filling");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "free3 n=2 depth 1"), |b| {
            b.iter(|| {
                SearchContext::new(&act, bounds)
                    .unwrap()
                    .with_execution(exec)
                    .check_n_filling(2, 1)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, paradoxical, filling);
criterion_main!(benches);
