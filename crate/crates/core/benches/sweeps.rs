//! Parallel against sequential evaluation of the identity suite and of a
//! data-parallel sweep over random instances.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use orientcalc::chern::{whitney_check, VirtualBundle};
use orientcalc::coeffring::Generator;
use orientcalc::fgl::FormalGroupLaw;
use orientcalc::par::{map_ordered, sequential};
use orientcalc::random;
use orientcalc::suite::{paper_checks, run_checks, SuiteConfig};

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for cap in [3u32, 4] {
        let checks = paper_checks(&SuiteConfig { cap, ..SuiteConfig::default() }).unwrap();
        group.bench_with_input(BenchmarkId::new("sequential", cap), &checks, |b, cs| {
            b.iter(|| black_box(run_checks(cs, Some(1))))
        });
        group.bench_with_input(BenchmarkId::new("parallel", cap), &checks, |b, cs| {
            b.iter(|| black_box(run_checks(cs, None)))
        });
    }
    group.finish();
}

fn whitney_sweep(c: &mut Criterion) {
    let law = FormalGroupLaw::universal(5).unwrap();
    let names = ["x1", "x2", "x3"];
    let ring = law.ring().extend(names.iter().map(|n| Generator::new(*n, 1)).collect()).unwrap();
    let mut rng = random::rng(1);
    let pairs: Vec<(VirtualBundle, VirtualBundle)> = (0..64)
        .map(|_| {
            (
                random::virtual_bundle(&mut rng, &ring, &names, 3, 2).unwrap(),
                random::virtual_bundle(&mut rng, &ring, &names, 3, 2).unwrap(),
            )
        })
        .collect();
    let mut group = c.benchmark_group("whitney_sweep");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| black_box(sequential(&pairs, |(v, w)| whitney_check(v, w)))));
    group.bench_function("parallel", |b| b.iter(|| black_box(map_ordered(&pairs, None, |(v, w)| whitney_check(v, w)))));
    group.finish();
}

criterion_group!(benches, suite, whitney_sweep);
criterion_main!(benches);
