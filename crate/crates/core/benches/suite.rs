use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use relnorm::harness::{find, run_suite, SampleConfig};

fn identity_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity_suite");
    group.sample_size(10);
    for (surface, q) in [("ellipsoid", "affine"), ("ellipsoid", "generic"), ("ellipsoid4", "manhart")] {
        let spec = find(surface).unwrap();
        for (mode, workers) in [("sequential", 1), ("parallel", 0)] {
            let cfg = SampleConfig { sample_count: 200, workers, ..SampleConfig::default() };
            group.bench_with_input(BenchmarkId::new(mode, format!("{surface}/{q}")), &cfg, |b, cfg| {
                b.iter(|| run_suite(&spec, q, cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, identity_suite);
criterion_main!(benches);
