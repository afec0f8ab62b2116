use criterion::{black_box, criterion_group, criterion_main, Criterion};

use softtrack::resistance::compaction_resistance;
use softtrack::sweep::{Axis, Constraint, DesignSpace, Sweep, SweepContext, Variable};
use softtrack::terrain::{ground_pressure, static_sinkage};
use softtrack::{
    evaluate, CompactionMode, TerrainParams, TrackGeometry, VehicleOperatingState,
};

fn soil() -> TerrainParams {
    TerrainParams {
        kp_override: Some(1.7),
        ..TerrainParams::paper_soft_soil()
    }
}

fn bench_evaluate(c: &mut Criterion) {
    let (g, t, s) = (TrackGeometry::paper_chassis(), soil(), VehicleOperatingState::paper_state());
    for mode in [CompactionMode::BekkerClassic, CompactionMode::VerbatimEq8] {
        c.bench_function(&format!("evaluate/{mode}"), |b| {
            b.iter(|| evaluate(black_box(&g), &t, black_box(&s), mode).unwrap())
        });
    }
}

fn bench_compaction(c: &mut Criterion) {
    let (g, t, s) = (TrackGeometry::paper_chassis(), soil(), VehicleOperatingState::paper_state());
    let p = ground_pressure(s.weight(), g.b, g.l).unwrap();
    let z = static_sinkage(p, &t, g.b).unwrap();
    c.bench_function("compaction/verbatim", |b| {
        b.iter(|| compaction_resistance(black_box(z), &t, &g, s.i, CompactionMode::VerbatimEq8).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let ctx = SweepContext {
        base_geometry: TrackGeometry::paper_chassis(),
        terrain: soil(),
        base_state: VehicleOperatingState::paper_state(),
        options: CompactionMode::BekkerClassic.into(),
        fire_test: None,
        extinguishers: Vec::new(),
    };
    let mut space = DesignSpace::point(&ctx.base_geometry, &ctx.base_state);
    space.constraints = vec![Constraint::PitchRatio, Constraint::SlopeClimb];
    space.set(Variable::B, Axis::Range { start: 0.10, stop: 0.30, step: 0.01 });
    space.set(Variable::L, Axis::Range { start: 0.5, stop: 1.5, step: 0.05 });
    space.set(Variable::V, Axis::Range { start: 0.5, stop: 1.5, step: 0.1 });
    let sweep = Sweep::new(&space, &ctx).unwrap();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    group.bench_function("parallel", |b| b.iter(|| sweep.run(None).unwrap()));
    group.bench_function("sequential", |b| b.iter(|| sweep.run_sequential(None).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_evaluate, bench_compaction, bench_sweep);
criterion_main!(benches);
