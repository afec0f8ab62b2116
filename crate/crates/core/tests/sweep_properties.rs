use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use softtrack::mission::{ExtinguisherSpec, FireTestSpec};
use softtrack::sweep::{Axis, Constraint, DesignSpace, Sweep, SweepContext, Variable, CSV_HEADER};
use softtrack::{evaluate, CompactionMode, TerrainParams, TrackGeometry, VehicleOperatingState};

fn ctx() -> SweepContext {
    SweepContext {
        base_geometry: TrackGeometry::paper_chassis(),
        terrain: TerrainParams {
            mu_t: Some(0.5),
            f_r: Some(0.1),
            kp_override: Some(1.7),
            ..TerrainParams::paper_soft_soil()
        },
        base_state: VehicleOperatingState::paper_state(),
        options: CompactionMode::BekkerClassic.into(),
        fire_test: Some(FireTestSpec::class_b()),
        extinguishers: vec![ExtinguisherSpec::preset("MFZL10-ABC").unwrap()],
    }
}

fn space(ctx: &SweepContext) -> DesignSpace {
    let mut s = DesignSpace::point(&ctx.base_geometry, &ctx.base_state);
    s.set(Variable::B, Axis::Range { start: 0.10, stop: 0.30, step: 0.02 });
    s.set(Variable::L, Axis::Range { start: 0.6, stop: 1.4, step: 0.1 });
    s.set(Variable::Tread, Axis::Range { start: 0.5, stop: 1.0, step: 0.1 });
    s.set(Variable::V, Axis::Range { start: 0.5, stop: 1.5, step: 0.25 });
    s
}

fn column(header: &csv::StringRecord, name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn dump_rows_reevaluate_to_the_same_numbers() {
    let ctx = ctx();
    let space = space(&ctx);
    let sweep = Sweep::new(&space, &ctx).unwrap();
    let mut buf = Vec::new();
    sweep.run(Some(&mut buf)).unwrap();

    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), CSV_HEADER.to_vec());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len() as u64, sweep.total());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sample = (rows.len() / 100).max(1);
    for _ in 0..sample {
        let row = &rows[rng.gen_range(0..rows.len())];
        let get = |name: &str| -> f64 { row[column(&header, name)].parse().unwrap() };
        let geom = TrackGeometry {
            b: get("b"),
            l: get("l"),
            tread: get("B"),
            ..ctx.base_geometry
        };
        let state = VehicleOperatingState {
            v: get("v"),
            m: get("m"),
            i: get("i"),
            ..ctx.base_state
        };
        let r = evaluate(&geom, &ctx.terrain, &state, ctx.options).unwrap();
        for (name, want) in [
            ("z_o", r.z_o),
            ("R_in", r.resistances.internal),
            ("R_b", r.resistances.bulldozing),
            ("R_c", r.resistances.compaction),
            ("R_g", r.resistances.grade),
            ("F", r.thrust),
            ("drawbar_pull", r.drawbar_pull),
            ("a", r.acceleration),
        ] {
            assert_eq!(get(name), want, "{name} at {row:?}");
        }
    }
}

#[test]
fn parallel_and_sequential_dumps_match() {
    let ctx = ctx();
    let space = space(&ctx);
    let sweep = Sweep::new(&space, &ctx).unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let ra = sweep.run(Some(&mut a)).unwrap();
    let rb = sweep.run_sequential(Some(&mut b)).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enlarging_a_range_never_lowers_the_best(
        var in 0usize..4,
        start_k in 0u32..4,
        len in 1u32..4,
        extra in 1u32..4,
        constrained in any::<bool>(),
    ) {
        let ctx = ctx();
        let var = Variable::ALL[var];
        let (lo, step) = match var {
            Variable::B => (0.08, 0.03),
            Variable::L => (0.5, 0.2),
            Variable::Tread => (0.4, 0.2),
            _ => (0.5, 0.2),
        };
        let start = lo + step * start_k as f64;
        let mut small = DesignSpace::point(&ctx.base_geometry, &ctx.base_state);
        if !constrained {
            small.constraints = vec![Constraint::PitchRatio];
        }
        small.set(var, Axis::Range { start, stop: start + step * len as f64, step });
        let mut large = small.clone();
        large.set(var, Axis::Range { start, stop: start + step * (len + extra) as f64, step });

        let best = |s: &DesignSpace| {
            Sweep::new(s, &ctx).unwrap().run(None).unwrap().best.and_then(|c| c.objective)
        };
        match (best(&small), best(&large)) {
            (Some(a), Some(b)) => prop_assert!(b >= a),
            (Some(_), None) => prop_assert!(false, "larger grid lost its feasible point"),
            _ => {}
        }
    }
}
