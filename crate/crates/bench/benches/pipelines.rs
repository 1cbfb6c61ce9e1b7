use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nefvol::conevol::{mc_volume, positive_cone_volume};
use nefvol::homlattice::{disc_product_cm, CmLattice};
use nefvol::report::{run, RunConfig, SurfaceInput};
use nefvol::surfaces::SurfaceSpec;
use nefvol_bench::{dense_gram, rank4_cone, rank_ladder};

fn exact_linalg(c: &mut Criterion) {
    let m = dense_gram(8);
    c.bench_function("det_exact_8x8", |b| b.iter(|| black_box(&m).det_exact()));
    c.bench_function("signature_8x8", |b| b.iter(|| black_box(&m).signature()));
}

fn hom_lattices(c: &mut Criterion) {
    c.bench_function("disc_product_cm_sweep", |b| {
        b.iter(|| {
            for d in [-1i64, -2, -3, -7, -11, -19] {
                for f1 in 1..=4u32 {
                    for f2 in 1..=4u32 {
                        let l1 = CmLattice::new(d, f1).unwrap();
                        let l2 = CmLattice::new(d, f2).unwrap();
                        black_box(disc_product_cm(&l1, &l2).unwrap());
                    }
                }
            }
        })
    });
}

fn volumes(c: &mut Criterion) {
    let ladder = rank_ladder();
    c.bench_function("positive_cone_volume_ranks_1_to_4", |b| {
        b.iter(|| {
            for (model, h) in &ladder {
                black_box(positive_cone_volume(model.gram(), h).unwrap());
            }
        })
    });
    let cone = rank4_cone();
    c.bench_function("mc_volume_rank4_65536", |b| {
        b.iter(|| black_box(mc_volume(&cone, 65_536, 1).unwrap()))
    });
}

fn reports(c: &mut Criterion) {
    let mut cfg = RunConfig::new(SurfaceInput::Taxonomy(SurfaceSpec::ProductIsogenousCm {
        d: -1,
        f1: 2,
        f2: 3,
    }));
    cfg.mc = false;
    c.bench_function("report_without_mc", |b| b.iter(|| black_box(run(&cfg).unwrap())));
}

criterion_group!(benches, exact_linalg, hom_lattices, volumes, reports);
criterion_main!(benches);
