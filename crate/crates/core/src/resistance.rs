//! Motion resistances of a tracked chassis on deformable soil: internal
//! (running gear), bulldozing, compaction and grade.

use std::fmt;
use std::str::FromStr;

use crate::chassis::TrackGeometry;
use crate::error::{Error, Result};
use crate::quadrature::AdaptiveSimpson;
use crate::terrain::{sinkage_modulus, TerrainParams};

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Operating point of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleOperatingState {
    /// Mass, kg.
    pub m: f64,
    /// Forward speed, m/s.
    pub v: f64,
    /// Slip ratio in (0, 1].
    pub i: f64,
    /// Grade angle, degrees.
    pub theta: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
}

impl VehicleOperatingState {
    /// 300 kg at 1.5 m/s, 20 % slip, on a 30° grade.
    pub fn paper_state() -> Self {
        VehicleOperatingState {
            m: 300.0,
            v: 1.5,
            i: 0.2,
            theta: 30.0,
            g: STANDARD_GRAVITY,
        }
    }

    pub fn weight(&self) -> f64 {
        self.m * self.g
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::domain("m", format!("mass {} must be > 0", self.m)));
        }
        if !(self.v.is_finite() && self.v >= 0.0) {
            return Err(Error::domain("v", format!("speed {} must be >= 0", self.v)));
        }
        if !(self.i > 0.0 && self.i <= 1.0) {
            return Err(Error::domain("i", format!("slip {} must lie in (0, 1]", self.i)));
        }
        if !(0.0..90.0).contains(&self.theta) {
            return Err(Error::domain("theta", format!("grade {} deg must lie in [0, 90)", self.theta)));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::domain("g", format!("gravity {} must be > 0", self.g)));
        }
        Ok(())
    }
}

/// How compaction resistance is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompactionMode {
    /// b·k·z_o^(n+1)/(n+1).
    #[default]
    BekkerClassic,
    /// The slip-sinkage integral with the constant 78 taken as printed.
    VerbatimEq8,
}

impl CompactionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CompactionMode::BekkerClassic => "bekker-classic",
            CompactionMode::VerbatimEq8 => "verbatim-eq8",
        }
    }
}

impl fmt::Display for CompactionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CompactionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bekker-classic" => Ok(CompactionMode::BekkerClassic),
            "verbatim-eq8" => Ok(CompactionMode::VerbatimEq8),
            other => Err(format!(
                "unknown compaction mode `{other}` (expected bekker-classic or verbatim-eq8)"
            )),
        }
    }
}

/// Compaction resistance together with the mode that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compaction {
    /// N.
    pub value: f64,
    pub mode: CompactionMode,
    /// Achieved absolute error of the quadrature, N. `None` for closed forms.
    pub quadrature_error: Option<f64>,
}

/// Internal resistance of the running gear, (W/1000)(133 + 9v), in N.
pub fn internal_resistance(weight: f64, v: f64) -> f64 {
    weight / 1000.0 * (133.0 + 9.0 * v)
}

/// Bulldozing resistance 2b ∫₀^z_o (γ K_p z + 2c √K_p) dz, in N.
pub fn bulldozing_resistance(z_o: f64, terrain: &TerrainParams, b: f64) -> Result<f64> {
    if !(z_o.is_finite() && z_o >= 0.0) {
        return Err(Error::domain("z_o", format!("sinkage {z_o} must be >= 0")));
    }
    let (kp, _) = terrain.kp()?;
    let gamma = terrain.unit_weight_n();
    let c = terrain.cohesion_pa();
    Ok(2.0 * b * (0.5 * gamma * kp * z_o * z_o + 2.0 * c * kp.sqrt() * z_o))
}

/// The slip-sinkage factor inside the printed compaction integral.
pub fn verbatim_compaction_integrand(x: f64, i: f64, n: f64) -> f64 {
    let slip = (i * x).powf(1.77);
    (78.0 - 2.78 * (-0.009 * slip).exp()).powf(n + 1.0)
}

/// Compaction resistance in N.
pub fn compaction_resistance(
    z_o: f64,
    terrain: &TerrainParams,
    geom: &TrackGeometry,
    i: f64,
    mode: CompactionMode,
) -> Result<Compaction> {
    compaction_resistance_with(z_o, terrain, geom, i, mode, &AdaptiveSimpson::default())
}

/// As [`compaction_resistance`], with an explicit integrator for the
/// verbatim mode. The integrator tolerance applies to the resistance in N.
pub fn compaction_resistance_with(
    z_o: f64,
    terrain: &TerrainParams,
    geom: &TrackGeometry,
    i: f64,
    mode: CompactionMode,
    integrator: &AdaptiveSimpson,
) -> Result<Compaction> {
    if !(z_o.is_finite() && z_o >= 0.0) {
        return Err(Error::domain("z_o", format!("sinkage {z_o} must be >= 0")));
    }
    if !(geom.l.is_finite() && geom.l > 0.0) {
        return Err(Error::domain("l", format!("contact length {} must be > 0", geom.l)));
    }
    if !(i > 0.0 && i <= 1.0) {
        return Err(Error::domain("i", format!("slip {i} must lie in (0, 1]")));
    }
    let n = terrain.n;
    // kN/m^(n+2) -> N/m^(n+2)
    let k = sinkage_modulus(terrain, geom.b)? * 1e3;
    let base = geom.b * k * z_o.powf(n + 1.0) / (n + 1.0);
    match mode {
        CompactionMode::BekkerClassic => Ok(Compaction {
            value: base,
            mode,
            quadrature_error: None,
        }),
        CompactionMode::VerbatimEq8 => {
            if base == 0.0 {
                return Ok(Compaction {
                    value: 0.0,
                    mode,
                    quadrature_error: Some(0.0),
                });
            }
            let scale = base / geom.l;
            let scaled = AdaptiveSimpson::new(integrator.abs_tol / scale, integrator.max_depth);
            let q = scaled.integrate(|x| verbatim_compaction_integrand(x, i, n), 0.0, geom.l)?;
            Ok(Compaction {
                value: scale * q.value,
                mode,
                quadrature_error: Some(scale * q.error_estimate),
            })
        }
    }
}

/// Grade resistance W·sin(theta), in N.
pub fn grade_resistance(weight: f64, theta: f64) -> f64 {
    weight * theta.to_radians().sin()
}
