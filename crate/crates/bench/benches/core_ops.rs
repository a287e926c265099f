//! Benchmarks for the hot paths: segmented sieving, certified floors,
//! counting scans, the explicit formula, and density integration.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pshapiro::analytic::{selberg_weights, vaaler_coefficients};
use pshapiro::density::integrate_f_shift;
use pshapiro::exactpow::{floor_pow_value, preimage_range, Exponent};
use pshapiro::primal::{sieve_range, PrimePi};
use pshapiro::pscount::{count_shifted, upsilon, UpsilonMode};
use pshapiro::zeta::{psi_explicit, ZeroTable};

fn bench_sieves(c: &mut Criterion) {
    c.bench_function("sieve_range 10^7", |b| {
        b.iter(|| {
            let segs = sieve_range(2, 10_000_000, 1 << 20).unwrap();
            let count: u64 = segs.iter().map(|s| s.prime_count()).sum();
            black_box(count)
        })
    });
    c.bench_function("prime_pi_table 10^6", |b| {
        b.iter(|| {
            let t = PrimePi::new(1_000_000).unwrap();
            black_box(t.count_leq(999_999))
        })
    });
}

fn bench_floors(c: &mut Criterion) {
    let half = Exponent::parse("1/2").unwrap();
    let dec = Exponent::parse("0.86").unwrap();
    c.bench_function("floor_pow c=1/2", |b| {
        let mut n = 1u64;
        b.iter(|| {
            n = n % 999_983 + 2;
            black_box(floor_pow_value(n, &half).unwrap())
        })
    });
    c.bench_function("floor_pow c=0.86", |b| {
        let mut n = 1u64;
        b.iter(|| {
            n = n % 99_991 + 2;
            black_box(floor_pow_value(n, &dec).unwrap())
        })
    });
    c.bench_function("preimage_range c=0.86", |b| {
        let mut m = 1u64;
        b.iter(|| {
            m = m % 9973 + 1;
            black_box(preimage_range(m, &dec).unwrap())
        })
    });
}

fn bench_counts(c: &mut Criterion) {
    let half = Exponent::parse("1/2").unwrap();
    let mut group = c.benchmark_group("counts");
    group.sample_size(10);
    group.bench_function("count_shifted x=10^6", |b| {
        b.iter(|| black_box(count_shifted(&half, 0, 1_000_000).unwrap().count))
    });
    group.bench_function("upsilon count-p N=10^4", |b| {
        b.iter(|| black_box(upsilon(&half, 10_000, UpsilonMode::CountP).unwrap().count))
    });
    group.finish();
}

fn bench_analytic(c: &mut Criterion) {
    c.bench_function("vaaler H=64 grid 10^3", |b| {
        let v = vaaler_coefficients(64);
        b.iter(|| {
            let mut worst: f64 = 0.0;
            for j in 0..1000 {
                let t = j as f64 / 1000.0;
                worst = worst.max(v.majorant(t) - (pshapiro::analytic::sawtooth(t) - v.approx(t)).abs());
            }
            black_box(worst)
        })
    });
    c.bench_function("selberg weights D=1000", |b| {
        b.iter(|| black_box(selberg_weights(1000).quadratic_form()))
    });
}

fn bench_zeta_density(c: &mut Criterion) {
    let table = ZeroTable::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/fixtures/zeta_zeros_100.txt"
    ))
    .unwrap();
    let t_max = table.max_gamma().unwrap();
    c.bench_function("psi_explicit x=100.5, 100 zeros", |b| {
        b.iter(|| black_box(psi_explicit(100.5, t_max, &table).unwrap().value))
    });
    let a = Exponent::parse("0.4").unwrap();
    let bb = Exponent::parse("0.86").unwrap();
    let mut group = c.benchmark_group("density");
    group.sample_size(10);
    group.bench_function("integrate_f_shift x=10^4", |b| {
        b.iter(|| black_box(integrate_f_shift(10_000, 1, &a, &bb).unwrap().integral))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_sieves,
    bench_floors,
    bench_counts,
    bench_analytic,
    bench_zeta_density
);
criterion_main!(benches);
