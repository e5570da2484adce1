use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ppareto::{distributions, estimators, FamilyId, SolverConfig};
use ppareto_bench::{reference, reference_sample};

fn evaluation(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    for f in FamilyId::ALL {
        let p = reference(f);
        g.bench_with_input(BenchmarkId::new("icdf", f), &p, |b, p| {
            b.iter(|| (1..100).map(|i| distributions::icdf(p, black_box(i as f64 / 100.0)).unwrap()).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("sample_1e4", f), &p, |b, p| b.iter(|| distributions::sample(p, 10_000, 3).unwrap()));
    }
    g.finish();
}

fn fitting(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("fit");
    g.sample_size(10);
    for f in FamilyId::ALL {
        for n in [1_000, 10_000] {
            let s = reference_sample(f, n, 1);
            g.bench_with_input(BenchmarkId::new(f.name(), n), &s, |b, s| b.iter(|| estimators::fit(f, s, &cfg).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, evaluation, fitting);
criterion_main!(benches);
