use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use amgm_core::extremal::{psi, two_point_hi};
use amgm_core::par::{map_indexed, Execution};
use amgm_core::verify::{falsify_sandwich, verify_attainment, verify_lemma_var, CampaignConfig, Side};

const MODES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_sandwich(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify_sandwich");
    group.sample_size(10);
    for trials in [1_000usize, 20_000] {
        group.throughput(Throughput::Elements(trials as u64));
        for (name, execution) in MODES {
            let cfg = CampaignConfig { execution, ..CampaignConfig::with_trials(trials, 1) };
            group.bench_with_input(BenchmarkId::new(name, trials), &cfg, |b, cfg| {
                b.iter(|| falsify_sandwich(cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_lemma_var(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_lemma_var");
    group.sample_size(10);
    let trials = 20_000usize;
    group.throughput(Throughput::Elements(trials as u64));
    for (name, execution) in MODES {
        let cfg = CampaignConfig { execution, ..CampaignConfig::with_trials(trials, 1) };
        group.bench_function(name, |b| b.iter(|| verify_lemma_var(&cfg).unwrap()));
    }
    group.finish();
}

fn bench_psi_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("psi_grid");
    let spec = two_point_hi(1.0, 4.0, 0.0).unwrap();
    let n = 100_000usize;
    group.throughput(Throughput::Elements(n as u64));
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| map_indexed(exec, n, |k| psi(&spec, 1e-3 * k as f64).unwrap()))
        });
    }
    for (name, exec) in MODES {
        group.bench_function(format!("attainment_{name}"), |b| {
            b.iter(|| verify_attainment(1.0, 4.0, Side::Hi, 10_000, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sandwich, bench_lemma_var, bench_psi_grid);
criterion_main!(benches);
