use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sadic::{
    apply_uniform, desubstitute, global_language, iterate, GlobalSource, Letter, ParseMode,
};
use sadic_bench::{corner_system, mixed_system};

fn apply(c: &mut Criterion) {
    let (set, _) = mixed_system();
    let s = set.get("a").unwrap();
    let p = set.alphabet().parse_pattern("obbo/boob/oobb/bboo").unwrap();
    c.bench_function("apply_uniform 4x4", |b| {
        b.iter(|| apply_uniform(s, black_box(&p)))
    });
}

fn iterates(c: &mut Criterion) {
    let (set, seq) = corner_system();
    let mut group = c.benchmark_group("iterate");
    for n in [4usize, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| iterate(&set, &seq, n, Letter::new(1)))
        });
    }
    group.finish();
}

fn languages(c: &mut Criterion) {
    let (set, seq) = mixed_system();
    let mut group = c.benchmark_group("global_language 3x3");
    group.sample_size(20);
    for n in [0usize, 1, 2] {
        group.bench_with_input(BenchmarkId::new("sequence", n), &n, |b, &n| {
            b.iter(|| global_language(&set, GlobalSource::Sequence(&seq), n, 3, 3, 1 << 22))
        });
        group.bench_with_input(BenchmarkId::new("set", n), &n, |b, &n| {
            b.iter(|| global_language(&set, GlobalSource::Set, n, 3, 3, 1 << 22))
        });
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let (set, seq) = mixed_system();
    let p = iterate(&set, &seq, 3, Letter::new(1)).unwrap();
    let window = p.sub(1, 1, 8, 8).unwrap();
    c.bench_function("desubstitute anchored", |b| {
        b.iter(|| desubstitute(black_box(&p), &set, ParseMode::Anchored))
    });
    c.bench_function("desubstitute windowed 8x8", |b| {
        b.iter(|| desubstitute(black_box(&window), &set, ParseMode::Windowed))
    });
}

criterion_group!(benches, apply, iterates, languages, parsing);
criterion_main!(benches);
