use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nct_core::realization::map_t;
use nct_core::sample::{random_element, rng_from_seed};
use nct_core::triple::{assemble_dirac, assemble_rep, spectrum, TruncatedBasis};
use nct_core::Theta;

fn bench_multiply(c: &mut Criterion) {
    let theta = Theta::rational(1, 3).unwrap();
    let mut group = c.benchmark_group("multiply");
    for terms in [8usize, 32, 128] {
        let mut rng = rng_from_seed(42);
        let a = random_element(theta, 8, terms, &mut rng);
        let b = random_element(theta, 8, terms, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |bench, _| {
            bench.iter(|| a.multiply(&b).unwrap())
        });
    }
    group.finish();
}

fn bench_map_t(c: &mut Criterion) {
    let theta = Theta::rational(2, 5).unwrap();
    let mut rng = rng_from_seed(42);
    let a = random_element(theta, 8, 64, &mut rng);
    c.bench_function("map_t/64-terms", |bench| {
        bench.iter(|| map_t(&a).unwrap())
    });
}

fn bench_triple(c: &mut Criterion) {
    let theta = Theta::rational(1, 3).unwrap();
    let mut group = c.benchmark_group("triple");
    group.sample_size(10);
    for cutoff in [4i64, 6, 8] {
        let basis = TruncatedBasis::standard(theta, cutoff, 1).unwrap();
        let mut rng = rng_from_seed(7);
        let a = random_element(theta, 2, 6, &mut rng);
        group.bench_with_input(BenchmarkId::new("assemble_rep", cutoff), &cutoff, |b, _| {
            b.iter(|| assemble_rep(&a, &basis).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dirac_spectrum", cutoff), &cutoff, |b, _| {
            b.iter(|| spectrum(&assemble_dirac(&basis), 1e-12).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_multiply, bench_map_t, bench_triple);
criterion_main!(benches);
