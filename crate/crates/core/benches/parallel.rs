use addcomb::experiments::{convex_scan, subgroup_scan, ConvexGenerator};
use addcomb::verify::{run_identity_suite_with, run_inequality_suite_with, run_subgroup_suite_with, Config, SUBGROUP_PRIMES};
use addcomb::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn batteries(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = Config { exec, ..Config::new(1, 60) };
        group.bench_with_input(BenchmarkId::new("identities", name), &cfg, |b, cfg| b.iter(|| run_identity_suite_with(cfg).unwrap()));
        let cfg = Config { exec, ..Config::new(1, 40) };
        group.bench_with_input(BenchmarkId::new("inequalities", name), &cfg, |b, cfg| b.iter(|| run_inequality_suite_with(cfg).unwrap()));
        group.bench_with_input(BenchmarkId::new("subgroups", name), &cfg, |b, cfg| {
            b.iter(|| run_subgroup_suite_with(cfg, &SUBGROUP_PRIMES).unwrap())
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("subgroups_p500", name), &exec, |b, &exec| {
            b.iter(|| subgroup_scan(500, 1, u32::MAX, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("convex_n128", name), &exec, |b, &exec| {
            b.iter(|| convex_scan(128, ConvexGenerator::Squares, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, batteries, scans);
criterion_main!(benches);
