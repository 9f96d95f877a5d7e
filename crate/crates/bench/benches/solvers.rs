use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use siteconvex::{
    canonical_functional, energy_profile, fixtures, gc_functional, minimize_hardness, random_geometry_search,
    DensityVector, PatternSearchOptions, RandomSearchSpec, SiteConfiguration,
};

/// Sites on a slightly perturbed circle, so no two coincide.
fn ring(k: usize) -> SiteConfiguration {
    let pts = (0..k)
        .map(|i| {
            let t = i as f64 / k as f64 * std::f64::consts::TAU;
            let r = 1.0 + 0.1 * (i % 3) as f64;
            [r * t.cos(), r * t.sin(), 0.0]
        })
        .collect();
    SiteConfiguration::coulomb(pts).unwrap()
}

fn subset_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("subset_table");
    for k in [6, 12, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| ring(k).subset_energies().len())
        });
    }
    g.finish();
}

fn profile(c: &mut Criterion) {
    let d = fixtures::diamond();
    let v = fixtures::v_star();
    c.bench_function("energy_profile/diamond", |b| {
        b.iter(|| energy_profile(black_box(&d), &v).unwrap())
    });
}

fn functionals(c: &mut Criterion) {
    let mut g = c.benchmark_group("half_filling");
    for k in [6, 8, 10] {
        let config = ring(k);
        let rho = DensityVector::half_filling(k);
        g.bench_with_input(BenchmarkId::new("gc_lp", k), &k, |b, _| {
            b.iter(|| gc_functional(&config, &rho).unwrap().value)
        });
        g.bench_with_input(BenchmarkId::new("canonical_lp", k), &k, |b, &k| {
            b.iter(|| canonical_functional(&config, &rho, k / 2).unwrap().value)
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let d = fixtures::diamond();
    let v = fixtures::v_gc();
    c.bench_function("minimize_hardness/diamond", |b| {
        b.iter(|| {
            minimize_hardness(&d, &v, 3, &[4, 5], &PatternSearchOptions::default())
                .unwrap()
                .best
                .eta
        })
    });
    let spec = RandomSearchSpec::new(6, 64, 2.0, 0);
    c.bench_function("random_geometry_search/64", |b| {
        b.iter(|| random_geometry_search(&spec).unwrap().len())
    });
}

criterion_group!(benches, subset_table, profile, functionals, search);
criterion_main!(benches);
