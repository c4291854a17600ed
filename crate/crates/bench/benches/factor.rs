use criterion::{black_box, criterion_group, criterion_main, Criterion};
use genfib_core::divisors::{factor_sequence_term, factorize, primality::is_prime, FactorConfig};
use num_bigint::BigInt;

fn factoring(c: &mut Criterion) {
    let semiprime = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
    c.bench_function("factorize 15-digit semiprime", |b| {
        b.iter(|| factorize(black_box(&semiprime)).unwrap())
    });

    let mersenne: BigInt = (BigInt::from(1) << 127u32) - 1u32;
    c.bench_function("is_prime 2^127-1", |b| {
        b.iter(|| is_prime(black_box(&mersenne)))
    });

    let one = BigInt::from(1);
    let cfg = FactorConfig::default();
    c.bench_function("factor F_120", |b| {
        b.iter(|| factor_sequence_term(&one, &one, black_box(120), &cfg).unwrap())
    });
}

criterion_group!(benches, factoring);
criterion_main!(benches);
