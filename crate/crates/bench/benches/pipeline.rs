use std::hint::black_box;

use bianchi_core::hecke::{heilbronn_set, operator, Domain};
use bianchi_core::linalg::charpoly;
use bianchi_core::pipeline::bundle;
use bianchi_core::QuadInt;
use criterion::{criterion_group, criterion_main, Criterion};

fn heilbronn(c: &mut Criterion) {
    let mut g = c.benchmark_group("heilbronn_set");
    for (name, pi) in [("d11_w", QuadInt::new(11, 0, 1)), ("d11_2", QuadInt::from_int(11, 2)), ("d2_5", QuadInt::from_int(2, 5))] {
        g.bench_function(name, |b| b.iter(|| heilbronn_set(black_box(&pi)).unwrap()));
    }
    g.finish();
}

fn spaces(c: &mut Criterion) {
    let mut g = c.benchmark_group("bundle");
    g.sample_size(10);
    g.bench_function("d11_k4", |b| b.iter(|| bundle(black_box(11), 4).unwrap()));
    g.bench_function("d7_k6", |b| b.iter(|| bundle(black_box(7), 6).unwrap()));
    g.finish();
}

fn hecke(c: &mut Criterion) {
    let b4 = bundle(11, 4).unwrap();
    let set = heilbronn_set(&QuadInt::new(11, 0, 1)).unwrap();
    let mut g = c.benchmark_group("hecke_operator");
    g.sample_size(10);
    for (name, domain) in [("V", Domain::V), ("W", Domain::W), ("Q", Domain::Quotient)] {
        g.bench_function(format!("d11_k4_{name}"), |b| {
            b.iter(|| operator(&b4, &set, domain.default_adjoint(), domain, false).unwrap())
        });
    }
    g.finish();

    let op = operator(&b4, &set, Domain::W.default_adjoint(), Domain::W, false).unwrap();
    c.bench_function("charpoly_d11_k4_W", |b| b.iter(|| charpoly(black_box(&op.matrix))));
}

criterion_group!(benches, heilbronn, spaces, hecke);
criterion_main!(benches);
