use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hoforms::conv::{conv_entire, ConvolutionJob};
use hoforms::forms::delta_qexp;
use hoforms::group::Gl2;
use hoforms::hecke::models::sl2z_pair;
use hoforms::hecke::Side;
use hoforms::invariants::{higher_invariants, MatrixModule};
use hoforms::lfun::{completed_lambda, LFunctionJob};
use hoforms::Matrix;
use num_complex::Complex64;

/// Jordan block of size `n` acting on itself, plus its transpose square.
fn unipotent_module(n: usize) -> MatrixModule {
    let jordan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j || j == i + 1)).collect()).collect();
    let rows: Vec<&[i64]> = jordan.iter().map(Vec::as_slice).collect();
    let j = Matrix::from_i64(&rows);
    MatrixModule::infinite(n, vec![("j".into(), j.clone()), ("j2".into(), j.mul(&j))]).unwrap()
}

fn bench_invariants(c: &mut Criterion) {
    let m = unipotent_module(8).with_q_max(6);
    c.bench_function("higher_invariants dim 8 q 6", |b| b.iter(|| higher_invariants(black_box(&m), 6).unwrap()));
}

fn bench_cosets(c: &mut Criterion) {
    let pair = sl2z_pair(1).unwrap();
    let g = Gl2::new(1, 0, 0, 7);
    c.bench_function("enumerate_cosets SL2(Z) diag(1,7)", |b| {
        b.iter(|| pair.enumerate_gamma_cosets(black_box(&g), Side::Left).unwrap())
    });
}

fn bench_lfun(c: &mut Criterion) {
    let d = delta_qexp(60).unwrap();
    let job = LFunctionJob::from_forms(&d, &d, 1.0).unwrap();
    let s = Complex64::new(6.0, 3.0);
    c.bench_function("completed_lambda Delta", |b| b.iter(|| completed_lambda(&job, black_box(s)).unwrap()));
}

fn bench_conv(c: &mut Criterion) {
    let d = delta_qexp(300).unwrap();
    let job = ConvolutionJob::from_forms(&d, Some(&d), &d, Some(&d), 1.0).unwrap();
    let (s, t) = (Complex64::new(12.0, 0.0), Complex64::new(0.0, 0.0));
    c.bench_function("conv_entire Delta x Delta at t = 0", |b| b.iter(|| conv_entire(&job, black_box(s), black_box(t)).unwrap()));
}

criterion_group!(benches, bench_invariants, bench_cosets, bench_lfun, bench_conv);
criterion_main!(benches);
