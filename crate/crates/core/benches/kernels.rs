use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heatlab_core::geometry::{convexity_scan, find_witness_triple, EllipsoidSpec, PairSampler};
use heatlab_core::initial_data::{make_v, MeridianField, WConstruction};
use heatlab_core::solver::{evolve_meridian, SolverConfig};
use rayon::ThreadPool;
use std::hint::black_box;

fn pools() -> Vec<(String, ThreadPool)> {
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    let label = format!("default-pool-{}", default.current_num_threads());
    vec![
        ("1-thread".into(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        (label, default),
    ]
}

fn adi_steps(c: &mut Criterion) {
    let v = make_v(2, 1.25).unwrap();
    let u0 = MeridianField::from_radial(&v, 256, 256).unwrap();
    let cfg = SolverConfig::new(1e-3, 256, 256, 1e-2);
    let mut g = c.benchmark_group("adi_10_steps_256x256");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| evolve_meridian(black_box(&u0), &cfg).unwrap()))
        });
    }
    g.finish();
}

fn witness_sweep(c: &mut Criterion) {
    let w = WConstruction::new(2, 1.25, 1.5, 0.2).unwrap();
    let outer = w.ellipsoid(1.5).unwrap();
    let inner = w.ellipsoid(1.45).unwrap();
    let mut g = c.benchmark_group("witness_sweep_256");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| find_witness_triple(black_box(1.6), &outer, &inner).unwrap()))
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let e = EllipsoidSpec::new(0.7, 1.6, 2).unwrap();
    let sampler = PairSampler::Polar {
        radii: (0..24).map(|k| 1.0 + k as f64 / 24.0).collect(),
        angles: 64,
    };
    let mut g = c.benchmark_group("convexity_scan_1536_points");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| convexity_scan(|p| -e.form(p), 1.0, black_box(&sampler))))
        });
    }
    g.finish();
}

criterion_group!(benches, adi_steps, witness_sweep, scan);
criterion_main!(benches);
