use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gt_super::patterns::enumerate_basis;
use gt_super::repmat::{all_generators, all_generators_sequential};
use gt_super::weights::HighestWeight;

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_generators");
    group.sample_size(10);
    for w in ["3,1|1,0", "2,1|0,0,0"] {
        let basis = enumerate_basis(&HighestWeight::parse(w).unwrap()).unwrap();
        let label = format!("{w} (dim {})", basis.len());
        group.bench_with_input(BenchmarkId::new("default", &label), &basis, |b, basis| {
            b.iter(|| all_generators(basis).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("sequential", &label),
            &basis,
            |b, basis| b.iter(|| all_generators_sequential(basis).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, assembly);
criterion_main!(benches);
