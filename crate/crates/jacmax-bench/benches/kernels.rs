//! Benchmarks for the hot computational kernels: exact resultants and
//! discriminants, mod-p factorization, and stabilizer-chain orders.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use jacmax_bench::base_poly;
use jacmax_core::group::{sp_generators, FiniteMatrixGroup};
use jacmax_core::modpoly::{double_root_analysis, factor, reduce_mod};
use jacmax_core::poly::{discriminant_with, resultant_with, ResultantAlgorithm};

fn bench_discriminant(c: &mut Criterion) {
    let f = base_poly();
    c.bench_function("discriminant_deg14_subresultant", |b| {
        b.iter(|| discriminant_with(black_box(&f), ResultantAlgorithm::SubresultantPrs).unwrap())
    });
    c.bench_function("discriminant_deg14_bareiss", |b| {
        b.iter(|| discriminant_with(black_box(&f), ResultantAlgorithm::SylvesterBareiss).unwrap())
    });
}

fn bench_resultant(c: &mut Criterion) {
    let f = base_poly();
    let g = f.derivative();
    c.bench_function("resultant_f_fprime_subresultant", |b| {
        b.iter(|| {
            resultant_with(black_box(&f), black_box(&g), ResultantAlgorithm::SubresultantPrs)
                .unwrap()
        })
    });
}

fn bench_modp(c: &mut Criterion) {
    let f = base_poly();
    c.bench_function("factor_deg14_mod_10007", |b| {
        b.iter(|| factor(&reduce_mod(black_box(&f), 10_007), 1))
    });
    c.bench_function("double_root_analysis_mod_89", |b| {
        b.iter(|| double_root_analysis(black_box(&f), 89).unwrap())
    });
}

fn bench_group_orders(c: &mut Criterion) {
    c.bench_function("order_sp4_f3", |b| {
        b.iter(|| {
            FiniteMatrixGroup::new(4, 3, sp_generators(2, 3)).order()
        })
    });
    c.bench_function("order_sl2_z9", |b| {
        b.iter(|| {
            FiniteMatrixGroup::new(2, 9, sp_generators(1, 9)).order()
        })
    });
}

criterion_group!(
    benches,
    bench_discriminant,
    bench_resultant,
    bench_modp,
    bench_group_orders
);
criterion_main!(benches);
