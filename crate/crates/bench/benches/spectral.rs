use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use zakharov_bench::fixture;
use zakharov_core::diagnostics::{besov_norm, sobolev_norm};
use zakharov_core::spectral::{apply_multiplier, fft3_in_place, lp_project, Direction, LpMode, Symbol};

fn fft(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft3_round_trip");
    for n in [32, 64] {
        let u = fixture(n).u.values().to_vec();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut v = u.clone();
                fft3_in_place(&mut v, n, Direction::Forward);
                fft3_in_place(&mut v, n, Direction::Inverse);
                black_box(v)
            })
        });
    }
    group.finish();
}

fn multipliers(c: &mut Criterion) {
    let state = fixture(32);
    let mut group = c.benchmark_group("multiplier_32");
    for (name, symbol) in [
        ("schrodinger", Symbol::Schrodinger(0.5)),
        ("half_wave", Symbol::HalfWave(0.5)),
        ("japanese_pow", Symbol::JapanesePow(4.0)),
    ] {
        group.bench_function(name, |b| b.iter(|| apply_multiplier(black_box(&state.u), &symbol).unwrap()));
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let state = fixture(32);
    c.bench_function("lp_project_32", |b| {
        b.iter(|| lp_project(black_box(&state.n), 0, LpMode::At).unwrap())
    });
    c.bench_function("besov_inf_1_32", |b| {
        b.iter(|| besov_norm(black_box(&state.n), 0.0, f64::INFINITY, 1.0).unwrap())
    });
    c.bench_function("sobolev_4_32", |b| b.iter(|| sobolev_norm(black_box(&state.u), 4.0)));
}

criterion_group!(benches, fft, multipliers, norms);
criterion_main!(benches);
