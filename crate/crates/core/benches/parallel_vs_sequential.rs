//! The same workloads on a one-thread pool and on the default pool. Built
//! without the `parallel` feature both variants run the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPool;
use rqm_core::clifford::build_gamma_set;
use rqm_core::green::dirac_green;
use rqm_core::matrixop::{dirac_operator, random_field};
use rqm_core::transport::{bundle_morphism, FrameField};
use rqm_core::waveeq::{conventional_diracian, Scheme};
use rqm_core::{Lattice, PotentialField, Units};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("default", all)]
}

fn kernel_assembly(c: &mut Criterion) {
    let lat = Lattice::new(24, 16, 0.025, 0.2).unwrap();
    let pot = PotentialField::preset("wave(0.5,1.0)", lat, 1.0, Units::default()).unwrap();
    let mut group = c.benchmark_group("kernel_assembly");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| dirac_green(&pot, 1.0, Scheme::CrankNicolson).unwrap().materialize(u64::MAX).unwrap()))
        });
    }
    group.finish();
}

fn operator_apply(c: &mut Criterion) {
    let lat = Lattice::new(64, 64, 0.05, 0.2).unwrap();
    let pot = PotentialField::preset("well(0.5)", lat, 1.0, Units::default()).unwrap();
    let op = dirac_operator(&build_gamma_set(), &pot, 1.0);
    let psi = random_field(lat, 4, &mut ChaCha8Rng::seed_from_u64(1));
    let mut group = c.benchmark_group("operator_apply");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pool.install(|| op.apply(&psi).unwrap())));
    }
    group.finish();
}

fn frame_work(c: &mut Criterion) {
    let lat = Lattice::new(64, 64, 0.05, 0.2).unwrap();
    let pot = PotentialField::preset("well(0.5)", lat, 1.0, Units::default()).unwrap();
    let diracian = conventional_diracian(&build_gamma_set(), &pot, 1.0);
    let mut group = c.benchmark_group("frame_construction");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                pool.install(|| {
                    let frame = FrameField::preset("random-smooth(3)", lat, 4).unwrap();
                    bundle_morphism(&frame, &diracian).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, kernel_assembly, operator_apply, frame_work);
criterion_main!(benches);
