use criterion::{criterion_group, criterion_main, Criterion};
use orthoprob_core::cox::{associativity_residual, extract_additive_representation, GridFunction};
use orthoprob_core::hilbert::{born, random_density, random_resolution};

fn residual(c: &mut Criterion) {
    let mut g = c.benchmark_group("cox");
    g.sample_size(10);
    for n in [129, 257] {
        let f = GridFunction::builtin("sumprod", n, 1.0).unwrap();
        g.bench_function(format!("residual/{n}"), |b| b.iter(|| associativity_residual(&f).unwrap()));
        g.bench_function(format!("extract/{n}"), |b| b.iter(|| extract_additive_representation(&f, 0.25).unwrap()));
    }
    g.finish();
}

fn born_rule(c: &mut Criterion) {
    let rho = random_density(3, 1).unwrap();
    let family = random_resolution(3, 2).unwrap();
    c.bench_function("born/resolution-d3", |b| {
        b.iter(|| family.iter().map(|p| born(&rho, p).unwrap()).sum::<f64>())
    });
}

criterion_group!(benches, residual, born_rule);
criterion_main!(benches);
