use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stphase::newton::{jacobian_mu, kouchnirenko_mu};
use stphase::poly::resultant;
use stphase::poly::roots::complex_roots;
use stphase::slice::irregularity_at_infinity;
use stphase::stationary::{generic_rank, spectrum};
use stphase::tameness::{bifurcation_set, is_tame};
use stphase::{Rational, UPoly};
use stphase_bench::{function, point, poly, GERMS, QUOTIENTS};

fn parsing(c: &mut Criterion) {
    let text = "(x - 2*y^2 + 3/4)^3*(x*y - 1)^2 + 5*x^4*y";
    c.bench_function("parse", |b| b.iter(|| poly(black_box(text))));
}

fn elimination(c: &mut Criterion) {
    let a = poly("x^3*y + 2*x*y^2 - y^3 + x - 1");
    let b = poly("x^2*y^2 - 3*x + y^4 + 2");
    c.bench_function("resultant-in-x", |bench| bench.iter(|| resultant(black_box(&a), black_box(&b), "x").unwrap()));
    let p = UPoly::from_coeffs([-7i64, 3, 0, 5, -2, 0, 0, 1, 1, -4, 2].iter().map(|&c| Rational::from_integer(c.into())).collect());
    c.bench_function("complex-roots-deg10", |bench| bench.iter(|| complex_roots(black_box(&p))));
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    let w = point(2, -3);
    for (name, p, q) in QUOTIENTS {
        let f = function(p, q);
        group.bench_with_input(BenchmarkId::from_parameter(name), &f, |b, f| b.iter(|| spectrum(f, &w).unwrap()));
    }
    group.finish();
    let f = function("x - y^3", "x");
    c.bench_function("generic-rank-cusp-over-x", |b| b.iter(|| generic_rank(&f, 1, 3).unwrap()));
}

fn milnor(c: &mut Criterion) {
    let zero = point(0, 0);
    let mut group = c.benchmark_group("milnor");
    for (name, text) in GERMS {
        let p = poly(text);
        group.bench_with_input(BenchmarkId::new("jacobian", name), &p, |b, p| b.iter(|| jacobian_mu(p, (&zero.0, &zero.1)).unwrap()));
        group.bench_with_input(BenchmarkId::new("kouchnirenko", name), &p, |b, p| b.iter(|| kouchnirenko_mu(p).unwrap()));
    }
    group.finish();
}

fn tameness(c: &mut Criterion) {
    let g = poly("x^3 + y^3 - 3*x*y");
    c.bench_function("tame-folium", |b| b.iter(|| is_tame(&g, None, 1, 4).unwrap()));
    c.bench_function("bifurcation-folium", |b| b.iter(|| bifurcation_set(&g, None, None, 1, 4).unwrap()));
}

fn irregularity(c: &mut Criterion) {
    let f = function("x - y^3", "x");
    let w0 = point(1, 1);
    c.bench_function("irregularity-cusp-over-x", |b| b.iter(|| irregularity_at_infinity(&f, &w0, 1).unwrap()));
}

criterion_group!(benches, parsing, elimination, spectra, milnor, tameness, irregularity);
criterion_main!(benches);
