use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qutrit_qkd::{run_protocol, ProtocolConfig, ProtocolVariant, Session};

fn rounds(c: &mut Criterion) {
    for variant in [ProtocolVariant::ThreeDeb, ProtocolVariant::HThreeDeb] {
        c.bench_function(&format!("{variant} 10k rounds"), |b| {
            b.iter_batched(
                || Session::new(variant, 0.1, 1).unwrap(),
                |mut s| {
                    for _ in 0..10_000 {
                        black_box(s.next_round().unwrap());
                    }
                },
                BatchSize::SmallInput,
            )
        });
    }
}

fn full_run(c: &mut Criterion) {
    let mut cfg = ProtocolConfig::new(ProtocolVariant::HThreeDeb, 0.1, 256, 1);
    cfg.min_check_rounds = 5_000;
    let mut group = c.benchmark_group("run_protocol");
    group.sample_size(10);
    group.bench_function("h3deb 5k checks", |b| {
        b.iter(|| run_protocol(black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, rounds, full_run);
criterion_main!(benches);
