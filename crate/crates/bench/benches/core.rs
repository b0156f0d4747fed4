use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;

use pellkit::applications::gp_scan;
use pellkit::arith::factor;
use pellkit::lehmer::{lehmer_sequences, LehmerParams};
use pellkit::pell::{fundamental_solution, minimal_solution, PellRhs};
use pellkit::stormer::{verify_theorem, Bounds, TheoremId, VerifyOptions};
use pellkit_bench::RADICANDS;

fn pell(c: &mut Criterion) {
    let mut g = c.benchmark_group("fundamental_solution");
    for &d in RADICANDS {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| fundamental_solution(black_box(d), PellRhs::PlusOne, false))
        });
    }
    g.finish();
    c.bench_function("minimal_solution 5x² − y² = 4", |b| b.iter(|| minimal_solution(black_box(5), 1, 4)));
}

fn factoring(c: &mut Criterion) {
    let mut g = c.benchmark_group("factor");
    for n in ["832040", "1000000007", "59425114757512643212875125"] {
        let v: BigUint = n.parse().unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &v, |b, v| b.iter(|| factor(black_box(v))));
    }
    g.finish();
}

fn sequences(c: &mut Criterion) {
    let p = LehmerParams::new(5, 1).unwrap();
    c.bench_function("lehmer_sequences n = 200", |b| b.iter(|| lehmer_sequences(black_box(200), &p)));
}

fn verification(c: &mut Criterion) {
    let t: TheoremId = "3.1".parse().unwrap();
    let bounds = Bounds { d_max: 40, m_max: 5 };
    c.bench_function("verify 3.1 D ≤ 40", |b| b.iter(|| verify_theorem(t, black_box(bounds), VerifyOptions::default())));
    c.bench_function("gp_scan 500", |b| b.iter(|| gp_scan(black_box(500), 3)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = pell, factoring, sequences, verification
}
criterion_main!(benches);
