//! Soil thrust, drawbar pull and the longitudinal force balance, plus the
//! end-to-end evaluation that ties the terrain, chassis and resistance
//! relations together.
//!
//! Thrust is computed over the contact area of both tracks (A = 2bl) and
//! used as the vehicle total in the force balance.

use crate::chassis::{
    contact_area, roadwheel_pitch_ratio, steering_check, RatioBand, TrackGeometry,
};
use crate::checks::CheckResult;
use crate::error::{Error, Result, StageExt};
use crate::quadrature::AdaptiveSimpson;
use crate::resistance::{
    bulldozing_resistance, compaction_resistance_with, grade_resistance, internal_resistance,
    Compaction, CompactionMode, VehicleOperatingState,
};
use crate::terrain::{ground_pressure, sinkage_modulus, static_sinkage, KpSource, TerrainParams};

/// The four motion resistances, N.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Resistances {
    pub internal: f64,
    pub bulldozing: f64,
    pub compaction: f64,
    pub grade: f64,
}

impl Resistances {
    pub fn total(&self) -> f64 {
        self.internal + self.bulldozing + self.compaction + self.grade
    }

    /// Everything except grade.
    pub fn terrain_total(&self) -> f64 {
        self.internal + self.bulldozing + self.compaction
    }
}

/// 1 − (K/(il))(1 − e^(−il/K)), evaluated without cancellation for small il/K.
pub fn slip_factor(i: f64, l: f64, shear_k: f64) -> f64 {
    let x = i * l / shear_k;
    1.0 + (-x).exp_m1() / x
}

/// Soil thrust (A·c + W·tan φ)·[1 − (K/(il))(1 − e^(−il/K))], in N.
///
/// `area` in m², `weight` in N.
pub fn soil_thrust(area: f64, terrain: &TerrainParams, weight: f64, i: f64, l: f64) -> Result<f64> {
    if !(area.is_finite() && area > 0.0) {
        return Err(Error::domain("A", format!("contact area {area} must be > 0")));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::domain("l", format!("contact length {l} must be > 0")));
    }
    if !(i > 0.0 && i <= 1.0) {
        return Err(Error::domain("i", format!("slip {i} must lie in (0, 1]")));
    }
    if !(terrain.shear_k.is_finite() && terrain.shear_k > 0.0) {
        return Err(Error::domain("K", format!("{} must be > 0", terrain.shear_k)));
    }
    let ceiling = area * terrain.cohesion_pa() + weight * terrain.tan_phi();
    Ok(ceiling * slip_factor(i, l, terrain.shear_k))
}

/// (F − ΣR)/m. Negative values mean the thrust cannot cover the resistances.
pub fn acceleration(thrust: f64, resistances: &Resistances, m: f64) -> Result<f64> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::domain("m", format!("mass {m} must be > 0")));
    }
    Ok((thrust - resistances.total()) / m)
}

/// Settings that are not part of the physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub compaction_mode: CompactionMode,
    pub ratio_band: RatioBand,
    pub integrator: AdaptiveSimpson,
}

impl From<CompactionMode> for EvalOptions {
    fn from(compaction_mode: CompactionMode) -> Self {
        EvalOptions {
            compaction_mode,
            ..EvalOptions::default()
        }
    }
}

/// Every intermediate and final quantity of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceReport {
    pub geometry: TrackGeometry,
    pub terrain: TerrainParams,
    pub state: VehicleOperatingState,
    /// W, N.
    pub weight: f64,
    /// Ground pressure, kPa.
    pub pressure: f64,
    /// k = k_c/b + k_phi, kN/m^(n+2).
    pub sinkage_modulus: f64,
    pub kp: f64,
    pub kp_source: KpSource,
    /// Static sinkage, m.
    pub z_o: f64,
    pub resistances: Resistances,
    pub compaction: Compaction,
    /// Contact area of both tracks, m².
    pub contact_area: f64,
    /// Soil thrust F, N.
    pub thrust: f64,
    /// F − (R_in + R_b + R_c), N.
    pub drawbar_pull: f64,
    /// m/s².
    pub acceleration: f64,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl PerformanceReport {
    /// |m·a + ΣR − F|, N.
    pub fn force_balance_residual(&self) -> f64 {
        (self.state.m * self.acceleration + self.resistances.total() - self.thrust).abs()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_PITCH_RATIO: &str = "pitch_ratio";
pub const CHECK_STEERING: &str = "steering";
pub const CHECK_THRUST: &str = "thrust_covers_resistance";

/// Runs W → p → z_o → resistances → F → a.
pub fn evaluate(
    geom: &TrackGeometry,
    terrain: &TerrainParams,
    state: &VehicleOperatingState,
    options: impl Into<EvalOptions>,
) -> Result<PerformanceReport> {
    let options = options.into();
    geom.validate().stage("geometry")?;
    terrain.validate().stage("terrain")?;
    state.validate().stage("state")?;

    let weight = state.weight();
    let pressure = ground_pressure(weight, geom.b, geom.l).stage("ground_pressure")?;
    let k = sinkage_modulus(terrain, geom.b).stage("sinkage_modulus")?;
    let z_o = static_sinkage(pressure, terrain, geom.b).stage("static_sinkage")?;
    let (kp, kp_source) = terrain.kp().stage("rankine_kp")?;

    let internal = internal_resistance(weight, state.v);
    let bulldozing = bulldozing_resistance(z_o, terrain, geom.b).stage("bulldozing_resistance")?;
    let compaction = compaction_resistance_with(
        z_o,
        terrain,
        geom,
        state.i,
        options.compaction_mode,
        &options.integrator,
    )
    .stage("compaction_resistance")?;
    let grade = grade_resistance(weight, state.theta);
    let resistances = Resistances {
        internal,
        bulldozing,
        compaction: compaction.value,
        grade,
    };

    let area = contact_area(geom);
    let thrust = soil_thrust(area, terrain, weight, state.i, geom.l).stage("soil_thrust")?;
    let accel = acceleration(thrust, &resistances, state.m).stage("acceleration")?;

    let mut checks = Vec::with_capacity(3);
    let pr = roadwheel_pitch_ratio(geom, options.ratio_band).stage("roadwheel_pitch_ratio")?;
    let band_margin = (pr.ratio - pr.band.min).min(pr.band.max - pr.ratio);
    checks.push(
        CheckResult::measured(CHECK_PITCH_RATIO, pr.pass, pr.ratio, 1.2, band_margin).with_note(
            format!("RD/P accepted in [{}, {}]", pr.band.min, pr.band.max),
        ),
    );
    if terrain.mu_t.is_some() && terrain.f_r.is_some() {
        let s = steering_check(geom, terrain, pressure).stage("steering_check")?;
        checks.push(CheckResult::measured(CHECK_STEERING, s.pass, s.ratio, s.limit, s.margin));
    } else {
        checks.push(CheckResult::not_applicable(
            CHECK_STEERING,
            "terrain has no mu_t/f_r",
        ));
    }
    checks.push(CheckResult::measured(
        CHECK_THRUST,
        accel >= 0.0,
        thrust,
        resistances.total(),
        thrust - resistances.total(),
    ));

    Ok(PerformanceReport {
        geometry: *geom,
        terrain: *terrain,
        state: *state,
        weight,
        pressure,
        sinkage_modulus: k,
        kp,
        kp_source,
        z_o,
        resistances,
        compaction,
        contact_area: area,
        thrust,
        drawbar_pull: thrust - resistances.terrain_total(),
        acceleration: accel,
        checks,
        warnings: geom.warnings(),
    })
}
