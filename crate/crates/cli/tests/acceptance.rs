//! Acceptance gate. Prints one line per criterion and exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use clap::Parser;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use softtrack::chassis::{roadwheel_pitch_ratio, steering_check, RatioBand};
use softtrack::mission::{circumnavigation_time, discharge_budget_check, temperature_check};
use softtrack::resistance::compaction_resistance;
use softtrack::sweep::{Axis, Constraint, DesignSpace, Sweep, SweepContext, Variable};
use softtrack::terrain::{ground_pressure, rankine_kp, static_sinkage};
use softtrack::traction::{slip_factor, soil_thrust};
use softtrack::{
    evaluate, CompactionMode, ExtinguisherSpec, FireTestSpec, TerrainParams, TrackGeometry,
    VehicleOperatingState, Verdict,
};
use softtrack_cli::{run, Cli, EXIT_OK};

struct Gate {
    failed: usize,
    total: usize,
}

impl Gate {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        self.total += 1;
        if !pass {
            self.failed += 1;
        }
        println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn cli(args: &[&str]) -> (u8, String) {
    let mut argv = vec!["softtrack"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn criterion_1(gate: &mut Gate) {
    let start = Instant::now();
    let (code, csv) = cli(&["table3", "--format", "csv"]);
    let elapsed = start.elapsed();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| -> f64 {
        let k = header.iter().position(|h| *h == name).unwrap();
        row[k].parse().unwrap()
    };
    let inputs = [
        ("m", 300.0),
        ("v", 1.5),
        ("i", 0.2),
        ("theta", 30.0),
        ("b", 0.18),
        ("l", 1.0),
        ("B", 0.8),
        ("K_p", 1.7),
    ];
    let presets_ok = inputs.iter().all(|(k, v)| col(k) == *v)
        && row[header.iter().position(|h| *h == "compaction_mode").unwrap()] == "bekker-classic";
    gate.record(
        "1.presets",
        presets_ok && code == EXIT_OK,
        format!("table3 presets m=300 v=1.5 i=0.2 theta=30 b=0.18 l=1.0 B=0.8 K_p=1.7 bekker-classic, exit {code}"),
    );
    for (name, printed, tol) in [
        ("R_in", 431.2, 0.005),
        ("R_g", 1471.5, 0.005),
        ("F", 3597.9, 0.005),
        ("a", 5.6, 0.02),
        ("z_o", 0.0024, 0.05),
        ("R_b", 15.6, 0.02),
        ("R_c", 2.0, 0.10),
    ] {
        let got = col(name);
        let e = rel(got, printed);
        gate.record(
            &format!("1.{name}"),
            e <= tol,
            format!("computed {got:.6} vs printed {printed}, rel err {:.3}% (tol {}%)", 100.0 * e, 100.0 * tol),
        );
    }
    gate.record(
        "1.runtime",
        elapsed < Duration::from_secs(1),
        format!("table3 ran in {elapsed:?} (< 1 s)"),
    );
}

fn criterion_2(gate: &mut Gate) {
    let kp = rankine_kp(29.0).unwrap();
    gate.record(
        "2.kp_formula",
        (kp - 2.884).abs() <= 1e-3,
        format!("rankine_kp(29 deg) = {kp:.6}, expected 2.884 +/- 0.001"),
    );
    let (_, text) = cli(&["table3"]);
    let flagged = text.contains("K_p: printed 1.7") && text.contains(&format!("{:.5}", kp));
    gate.record(
        "2.kp_flag",
        flagged,
        "table3 report flags printed K_p = 1.7 against the formula value".into(),
    );
}

fn criterion_3(gate: &mut Gate) {
    let g = TrackGeometry {
        roadwheel_diameter: 0.19,
        pitch: 0.155,
        ..TrackGeometry::paper_chassis()
    };
    let r = roadwheel_pitch_ratio(&g, RatioBand { min: 1.1, max: 1.3 }).unwrap();
    gate.record(
        "3.pitch_ratio",
        (r.ratio - 1.2258).abs() <= 1e-4 && r.pass,
        format!("RD/P = {:.6}, in [1.1, 1.3]: {}", r.ratio, r.pass),
    );
}

fn criterion_4(gate: &mut Gate) {
    let b = circumnavigation_time(&FireTestSpec::class_b(), 1.5).unwrap();
    let ext = ExtinguisherSpec::preset("MFZL10-ABC").unwrap();
    let budget = discharge_budget_check(&FireTestSpec::class_b(), 1.5, &ext).unwrap();
    gate.record(
        "4.class_b",
        (b - 11.89).abs() <= 0.01 && b < 20.0 && budget.verdict == Verdict::Pass,
        format!("class B lap {b:.4} s (11.89 +/- 0.01), budget 20 s: {}", budget.verdict),
    );
    let a = circumnavigation_time(&FireTestSpec::class_a(), 1.5).unwrap();
    gate.record(
        "4.class_a",
        (a - 10.50).abs() <= 0.01,
        format!("class A lap {a:.4} s (10.50 +/- 0.01)"),
    );
    let presets = ExtinguisherSpec::presets();
    let failing: Vec<String> = presets
        .iter()
        .filter(|e| temperature_check(e).verdict != Verdict::Pass)
        .map(|e| e.model.clone())
        .collect();
    gate.record(
        "4.temperature",
        presets.len() == 8 && failing.is_empty(),
        format!("{} presets checked against -10..55 C, failing: {failing:?}", presets.len()),
    );
}

fn reference_soil() -> TerrainParams {
    TerrainParams {
        kp_override: Some(1.7),
        ..TerrainParams::paper_soft_soil()
    }
}

fn criterion_5_thrust(gate: &mut Gate) {
    let soil = reference_soil();
    let f: Vec<f64> = (1..=100)
        .map(|k| soil_thrust(0.36, &soil, 2943.0, k as f64 / 100.0, 1.0).unwrap())
        .collect();
    let monotone = f.windows(2).all(|w| w[1] > w[0]);
    gate.record(
        "5.thrust_monotone",
        monotone,
        "soil_thrust strictly increasing on i = 0.01..1.00 (100 points)".into(),
    );
    let (i, l) = (1e-6, 1.0);
    let bracket = slip_factor(i, l, soil.shear_k);
    let first_order = i * l / (2.0 * soil.shear_k);
    let ceiling = 0.36 * soil.cohesion_pa() + 2943.0 * soil.tan_phi();
    let via_thrust = soil_thrust(0.36, &soil, 2943.0, i, l).unwrap() / ceiling;
    let e = rel(bracket, first_order).max(rel(via_thrust, first_order));
    gate.record(
        "5.thrust_small_slip",
        e <= 0.05,
        format!("bracket at i=1e-6 is {bracket:.6e} vs il/(2K) = {first_order:.6e}, rel err {e:.2e} (tol 5%)"),
    );
}

fn random_inputs(rng: &mut ChaCha8Rng) -> (TrackGeometry, TerrainParams, VehicleOperatingState) {
    let geom = TrackGeometry {
        b: rng.gen_range(0.05..0.8),
        l: rng.gen_range(0.2..4.0),
        tread: rng.gen_range(0.5..3.0),
        ..TrackGeometry::paper_chassis()
    };
    let soil = TerrainParams {
        n: rng.gen_range(0.3..1.5),
        k_c: rng.gen_range(0.0..100.0),
        k_phi: rng.gen_range(50.0..3000.0),
        c: rng.gen_range(0.0..30.0),
        phi: rng.gen_range(0.0..45.0),
        gamma: rng.gen_range(5.0..25.0),
        shear_k: rng.gen_range(0.005..0.1),
        kp_override: if rng.gen_bool(0.5) { Some(rng.gen_range(1.0..6.0)) } else { None },
        ..TerrainParams::paper_soft_soil()
    };
    let state = VehicleOperatingState {
        m: rng.gen_range(10.0..5000.0),
        v: rng.gen_range(0.0..5.0),
        i: rng.gen_range(0.01..1.0),
        theta: rng.gen_range(0.0..60.0),
        g: 9.81,
    };
    (geom, soil, state)
}

fn criterion_5_force_balance(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (g, t, s) = random_inputs(&mut rng);
        let r = evaluate(&g, &t, &s, CompactionMode::BekkerClassic).unwrap();
        worst = worst.max(r.force_balance_residual());
    }
    gate.record(
        "5.force_balance",
        worst < 1e-9,
        format!("max |m a + sum R - F| over 1000 random inputs = {worst:.3e} N (< 1e-9)"),
    );
}

/// Composite Simpson over `n` (even) intervals of the compaction integral,
/// written out independently of the library.
fn simpson_oracle(soil: &TerrainParams, b: f64, l: f64, i: f64, z: f64, n: usize) -> f64 {
    let f = |x: f64| (78.0 - 2.78 * (-0.009 * (i * x).powf(1.77)).exp()).powf(soil.n + 1.0);
    let h = l / n as f64;
    let mut sum = f(0.0) + f(l);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(k as f64 * h);
    }
    let integral = sum * h / 3.0;
    let k_n = (soil.k_c / b + soil.k_phi) * 1000.0;
    b * k_n * z.powf(soil.n + 1.0) / (l * (soil.n + 1.0)) * integral
}

fn criterion_5_quadrature(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (g, t, s) = random_inputs(&mut rng);
        let p = ground_pressure(s.m * s.g, g.b, g.l).unwrap();
        let z = static_sinkage(p, &t, g.b).unwrap();
        let adaptive = compaction_resistance(z, &t, &g, s.i, CompactionMode::VerbatimEq8)
            .unwrap()
            .value;
        let oracle = simpson_oracle(&t, g.b, g.l, s.i, z, 1_000_000);
        worst = worst.max(rel(adaptive, oracle));
    }
    gate.record(
        "5.quadrature",
        worst <= 1e-6,
        format!("verbatim compaction vs 1e6-interval Simpson on 20 random terrains: max rel diff {worst:.2e} (tol 1e-6)"),
    );
}

fn criterion_5_sweep(gate: &mut Gate) {
    let ctx = SweepContext {
        base_geometry: TrackGeometry::paper_chassis(),
        terrain: TerrainParams {
            mu_t: Some(0.5),
            f_r: Some(0.1),
            ..reference_soil()
        },
        base_state: VehicleOperatingState::paper_state(),
        options: CompactionMode::BekkerClassic.into(),
        fire_test: Some(FireTestSpec::class_b()),
        extinguishers: vec![ExtinguisherSpec::preset("MFZL10-ABC").unwrap()],
    };
    let mut space = DesignSpace::point(&ctx.base_geometry, &ctx.base_state);
    space.constraints = Constraint::ALL.to_vec();
    space.set(Variable::B, Axis::Range { start: 0.10, stop: 0.28, step: 0.02 });
    space.set(Variable::L, Axis::Range { start: 0.5, stop: 1.4, step: 0.1 });
    space.set(Variable::V, Axis::Range { start: 0.6, stop: 1.5, step: 0.1 });
    space.set(Variable::M, Axis::Range { start: 200.0, stop: 2000.0, step: 200.0 });
    let start = Instant::now();
    let sweep = Sweep::new(&space, &ctx).unwrap();
    let mut seq = Vec::new();
    let a = sweep.run_sequential(Some(&mut seq)).unwrap();
    let mut order: Vec<u64> = (0..sweep.total()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    let mut par = Vec::new();
    let b = sweep.run_in_order(&order, Some(&mut par)).unwrap();
    let elapsed = start.elapsed();
    gate.record(
        "5.sweep_determinism",
        sweep.total() == 10_000 && seq == par && a == b,
        format!(
            "{} points, sequential vs permuted parallel CSV identical: {}, results equal: {}",
            sweep.total(),
            seq == par,
            a == b
        ),
    );
    gate.record(
        "5.sweep_runtime",
        elapsed < Duration::from_secs(10),
        format!("both runs took {elapsed:?} (< 10 s)"),
    );
}

fn criterion_5_steering(gate: &mut Gate) {
    let soil = TerrainParams {
        mu_t: Some(0.5),
        f_r: Some(0.1),
        ..reference_soil()
    };
    let mut ok = true;
    for g in [
        TrackGeometry::paper_chassis(),
        TrackGeometry { l: 4.0, tread: 0.5, ..TrackGeometry::paper_chassis() },
    ] {
        let base = steering_check(&g, &soil, 8.175).unwrap();
        for alpha in [0.5, 2.0, 10.0] {
            let s = TrackGeometry { l: alpha * g.l, tread: alpha * g.tread, ..g };
            ok &= steering_check(&s, &soil, 8.175).unwrap().pass == base.pass;
        }
    }
    gate.record(
        "5.steering_invariance",
        ok,
        "steering verdict unchanged under (l, B) -> (a l, a B), a in {0.5, 2, 10}, passing and failing cases".into(),
    );
}

fn main() {
    let mut gate = Gate { failed: 0, total: 0 };
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    criterion_5_thrust(&mut gate);
    criterion_5_force_balance(&mut gate);
    criterion_5_quadrature(&mut gate);
    criterion_5_sweep(&mut gate);
    criterion_5_steering(&mut gate);
    println!("acceptance: {} of {} criteria pass", gate.total - gate.failed, gate.total);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
