use anyonfock::density::{rho_moment, DensityParams};
use anyonfock::pointproc::{build_levy, sample_replicate, LevyKind};
use anyonfock::qcore::QKernel;
use anyonfock::qfock::{create, project_qsym, random_off_delta_tensor, FockVector};
use anyonfock::quasifree::{npoint_qpermanent, KPair};
use anyonfock_bench::{bench_grid, bench_smears, bench_space};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_projection(c: &mut Criterion) {
    let space = bench_space(4, 1, 1.1);
    let raw = random_off_delta_tensor(&space, 4, 1).unwrap();
    c.bench_function("project_qsym_order4_m4", |b| {
        b.iter(|| project_qsym(&space, black_box(&raw)).unwrap())
    });
}

fn bench_create_chain(c: &mut Criterion) {
    let space = bench_space(5, 1, 0.9);
    let h = &bench_smears(space.n_sites(), 1)[0];
    c.bench_function("create_power4_m5", |b| {
        b.iter(|| {
            let mut v = FockVector::vacuum(&space, 4).unwrap();
            for _ in 0..4 {
                v = create(&space, black_box(h), &v).unwrap();
            }
            v
        })
    });
}

fn bench_qpermanent(c: &mut Criterion) {
    let grid = bench_grid(4, 1);
    let kernel = QKernel::new(anyonfock::C64::from_polar(1.0, 0.7)).unwrap();
    let pair = KPair::scalar(&grid, kernel.eta(), 1.2).unwrap();
    let gs = bench_smears(4, 4);
    let hs = bench_smears(4, 4);
    c.bench_function("qpermanent_n4_m4", |b| {
        b.iter(|| npoint_qpermanent(&grid, kernel, &pair, black_box(&gs), black_box(&hs)).unwrap())
    });
}

fn bench_density_moment(c: &mut Criterion) {
    let grid = bench_grid(4, 1);
    let params = DensityParams::new(0.5, 1.0).unwrap();
    let fs = bench_smears(4, 5)
        .into_iter()
        .map(|f| {
            anyonfock::qcore::GridFunction::new(
                f.values()
                    .iter()
                    .map(|v| anyonfock::C64::new(v.re, 0.0))
                    .collect(),
            )
        })
        .collect::<Vec<_>>();
    c.bench_function("rho_moment_n5_m4", |b| {
        b.iter(|| rho_moment(&grid, black_box(&fs), &params).unwrap())
    });
}

fn bench_sampler(c: &mut Criterion) {
    let grid = bench_grid(4, 1);
    let model = build_levy(LevyKind::NegBin, 0.5, 1.0).unwrap();
    c.bench_function("negbin_sample_1k_configs", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for rep in 0..1000u64 {
                acc += sample_replicate(&grid, &model, 7, rep).masses()[0];
            }
            black_box(acc)
        })
    });
}

criterion_group!(
    benches,
    bench_projection,
    bench_create_chain,
    bench_qpermanent,
    bench_density_moment,
    bench_sampler
);
criterion_main!(benches);
