use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use torext_bench::{n2_even_ext, n2_lift, n2_system};
use torext_core::bgg::bgg_r;
use torext_core::ci_ops::{build_gk, ci_operators};
use torext_core::ext_rmodule::r_free_resolution;
use torext_core::fixtures;
use torext_core::resolution::resolve;
use torext_core::tor_emodule::{e_free_resolution, tor_emodule};

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("n2");
    g.sample_size(10);
    let n2 = fixtures::n(2);
    let f = fixtures::cubes().f;
    g.bench_function("resolve_over_r_11", |b| b.iter(|| resolve(black_box(&n2), 11).unwrap()));
    g.bench_function("tor_emodule", |b| b.iter(|| tor_emodule(black_box(&n2), &f).unwrap()));
    let t = tor_emodule(&n2, &f).unwrap();
    g.bench_function("e_free_resolution_5", |b| b.iter(|| e_free_resolution(black_box(&t), 5)));
    let l = n2_lift(8);
    g.bench_function("ci_operators_8", |b| b.iter(|| ci_operators(black_box(&l)).unwrap()));
    let sys = n2_system(8, 4);
    g.bench_function("build_gk", |b| b.iter(|| build_gk(black_box(&sys)).unwrap()));
    let u = n2_even_ext();
    g.bench_function("r_free_resolution_even", |b| b.iter(|| r_free_resolution(black_box(&u), 4).unwrap()));
    g.bench_function("bgg_r_even", |b| b.iter(|| bgg_r(black_box(&u))));
    g.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
