use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tpp_bench::{factor_triple, group, sample_matrix};
use tpp_core::algebra::AlgebraElement;
use tpp_core::{
    check_tpp_naive, check_tpp_quotient, enumerate_tpp, find_maximal, multiply_via_group, SearchConfig, TppTriple,
};

fn checkers(c: &mut Criterion) {
    let g = group("sym:4");
    let t = TppTriple::from_ids(&g, &[0, 1, 2], &[0, 3, 8], &[0, 13, 21]).unwrap();
    c.bench_function("check_tpp_naive sym:4 3x3x3", |b| b.iter(|| check_tpp_naive(black_box(&g), black_box(&t))));
    c.bench_function("check_tpp_quotient sym:4 3x3x3", |b| {
        b.iter(|| check_tpp_quotient(black_box(&g), black_box(&t)))
    });
}

fn search(c: &mut Criterion) {
    let s3 = group("sym:3");
    c.bench_function("enumerate_tpp sym:3", |b| {
        b.iter(|| enumerate_tpp(black_box(&s3), &SearchConfig::enumerate(1)).unwrap().len())
    });
    let c8 = group("cyc:8");
    c.bench_function("find_maximal cyc:8", |b| {
        b.iter(|| find_maximal(black_box(&c8), &SearchConfig::maximal(1)).unwrap())
    });
}

fn algebra(c: &mut Criterion) {
    let g = group("prod:(cyc:2,cyc:2,cyc:2)");
    let t = factor_triple(&g);
    let (a, bm) = (sample_matrix(2, 2, 1), sample_matrix(2, 2, 2));
    c.bench_function("multiply_via_group <2,2,2>", |b| {
        b.iter(|| multiply_via_group(black_box(&g), &t, &a, &bm).unwrap())
    });
    let s4 = group("sym:4");
    let x = AlgebraElement::from_coeffs(&s4, (0..24i64).map(|i| num_rational_int(i % 5 - 2)).collect())
        .unwrap();
    c.bench_function("convolve sym:4 dense", |b| b.iter(|| black_box(&x).convolve(&x).unwrap()));
}

fn num_rational_int(v: i64) -> tpp_core::algebra::Rational {
    tpp_core::algebra::Rational::from_integer(v.into())
}

criterion_group!(benches, checkers, search, algebra);
criterion_main!(benches);
