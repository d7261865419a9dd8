use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use twinbeam_core::dynamics::{closed_form_transfer, evolve, TripletParams};
use twinbeam_core::experiment::{RunConfig, Stages, SweepContext};
use twinbeam_core::fock::trilinear_propagate;
use twinbeam_core::interference::{hom_profiles, sfg_profile, BeamSplitter};
use twinbeam_core::SchmidtBasis;

fn triplet(c: &mut Criterion) {
    let mut g = c.benchmark_group("triplet");
    for gamma in [0.0, 0.5, 1.0] {
        let p = TripletParams::vacuum_seeded(1.0, 1e6, gamma, 2e-3).unwrap();
        g.bench_function(format!("evolve_g{gamma}"), |b| b.iter(|| evolve(black_box(&p), 2e-3).unwrap()));
    }
    let p = TripletParams::vacuum_seeded(1.0, 1e6, 1.0, 2e-3).unwrap();
    g.bench_function("closed_form_g1", |b| b.iter(|| closed_form_transfer(black_box(&p), 2e-3).unwrap()));
    g.bench_function("fock_n10", |b| b.iter(|| trilinear_propagate(1.0, 10, black_box(0.09), 10).unwrap()));
    g.finish();
}

fn beam(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let mut g = c.benchmark_group("beam");
    g.sample_size(10);
    g.bench_function("schmidt_basis", |b| {
        b.iter(|| SchmidtBasis::new(&cfg.pump, &cfg.schmidt, &cfg.grids.frequency).unwrap())
    });
    let ctx = SweepContext::new(&cfg).unwrap();
    g.bench_function("state_170mW_g1", |b| b.iter(|| ctx.state(1.0, black_box(0.17)).unwrap()));
    let tb = ctx.state(1.0, 0.17).unwrap();
    let (shifts, taus) = ctx.delays();
    g.bench_function("sfg_profile", |b| b.iter(|| sfg_profile(&tb, &ctx.temporal, black_box(&shifts)).unwrap()));
    let bs = BeamSplitter::balanced();
    g.bench_function("hom_profiles", |b| b.iter(|| hom_profiles(&tb, &bs, black_box(&taus)).unwrap()));
    g.bench_function("sweep_cell_all_stages", |b| b.iter(|| ctx.cell(1.0, black_box(0.17), Stages::ALL).unwrap()));
    g.finish();
}

criterion_group!(benches, triplet, beam);
criterion_main!(benches);
