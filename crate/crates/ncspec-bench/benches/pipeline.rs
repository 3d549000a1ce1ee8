use criterion::{criterion_group, criterion_main, Criterion};
use ncspec::linalg::{hermitian_spectrum, random_hermitian};
use ncspec::{
    check_multiplicativity, extend, gallery, verify_n1, verify_n11, HodgeChoice, TensorSpaces, Tolerance,
};
use ncspec_bench::{example, pair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn linalg(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = random_hermitian(64, &mut rng);
    c.bench_function("hermitian_spectrum/64", |b| b.iter(|| hermitian_spectrum(black_box(&h))));
}

fn verifiers(c: &mut Criterion) {
    let tol = Tolerance::default();
    let ex = example("two-point-squared");
    c.bench_function("verify_n1/two-point-squared", |b| {
        b.iter(|| verify_n1(black_box(&ex.geometry.data), tol))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let data = gallery::random_n11_from_pair(3, &mut rng);
    c.bench_function("verify_n11/random-12", |b| b.iter(|| verify_n11(black_box(&data), tol)));
}

fn extension(c: &mut Criterion) {
    let mut group = c.benchmark_group("extension");
    group.sample_size(10);
    for name in ["two-point", "m2", "two-point-squared"] {
        let ex = example(name);
        group.bench_function(format!("spaces/{name}"), |b| b.iter(|| TensorSpaces::new(black_box(&ex.geometry))));
        group.bench_function(format!("extend/{name}"), |b| {
            b.iter(|| extend(black_box(&ex.geometry), &ex.connection, HodgeChoice::default()))
        });
    }
    group.finish();
}

fn multiplicativity(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiplicativity");
    group.sample_size(10);
    let (e1, e2, product) = pair("two-point", "two-point-b");
    group.bench_function("two-point*two-point-b", |b| {
        b.iter(|| check_multiplicativity(&e1, &e2, black_box(&product), Tolerance::default()))
    });
    group.finish();
}

criterion_group!(benches, linalg, verifiers, extension, multiplicativity);
criterion_main!(benches);
