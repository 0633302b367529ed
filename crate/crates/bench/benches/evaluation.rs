use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qutrit_qkd::{
    chsh3_optimal_configuration, enumerate_local_models, ghz, hchsh3_optimal_configuration,
    mix_noise, observable, product_setting, Inequality, PhaseTriple,
};

fn exact(c: &mut Criterion) {
    let rho = mix_noise(&ghz(), 0.2).unwrap();
    let chsh = chsh3_optimal_configuration();
    let hchsh = hchsh3_optimal_configuration();
    c.bench_function("chsh3 exact", |b| {
        b.iter(|| chsh.evaluate(black_box(&rho)).unwrap())
    });
    c.bench_function("hchsh3 exact", |b| {
        b.iter(|| hchsh.evaluate(black_box(&rho)).unwrap())
    });
}

fn observables(c: &mut Criterion) {
    let x = PhaseTriple::from_angles([0.1, 1.3, -2.0]);
    let y = PhaseTriple::from_angles([0.7, -0.4, 2.9]);
    c.bench_function("product observable", |b| {
        b.iter(|| observable(&product_setting(black_box(&x), black_box(&y))))
    });
}

fn local_models(c: &mut Criterion) {
    c.bench_function("hchsh3 local models", |b| {
        b.iter(|| enumerate_local_models(black_box(Inequality::Hchsh3)))
    });
}

criterion_group!(benches, exact, observables, local_models);
criterion_main!(benches);
