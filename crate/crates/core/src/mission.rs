//! Mission requirements for a robot that walks an extinguisher around a
//! standard class A (wood crib) or class B (liquid pan) fire test, and the
//! checks that compare a candidate against them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::chassis::TrackGeometry;
use crate::checks::{CheckResult, FeasibilityReport};
use crate::error::{Error, Result, StageExt};
use crate::resistance::VehicleOperatingState;
use crate::terrain::TerrainParams;
use crate::traction::{evaluate, EvalOptions, PerformanceReport, CHECK_PITCH_RATIO, CHECK_STEERING};

/// Grade the robot must be able to climb, degrees.
pub const REQUIRED_SLOPE_DEG: f64 = 30.0;
/// Ambient range the extinguisher must operate over, °C.
pub const REQUIRED_TEMP_RANGE: (f64, f64) = (-10.0, 55.0);

pub const CHECK_SLOPE: &str = "slope_climb";
pub const CHECK_DISCHARGE: &str = "discharge_budget";
pub const CHECK_REACH: &str = "reach_longest";
pub const CHECK_HEIGHT: &str = "reach_highest";
pub const CHECK_TEMPERATURE: &str = "operating_temperature";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FireClass {
    A,
    B,
}

impl fmt::Display for FireClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FireClass::A => "A",
            FireClass::B => "B",
        })
    }
}

impl FromStr for FireClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(FireClass::A),
            "B" | "b" => Ok(FireClass::B),
            other => Err(format!("unknown fire class `{other}` (expected A or B)")),
        }
    }
}

/// Plan-view shape of a fire test. Metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Footprint {
    Square { side: f64, height: f64 },
    Circle { diameter: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FireTestSpec {
    pub class: FireClass,
    pub footprint: Footprint,
    /// Shortest distance from the robot centroid to the outer edge of the fire, m.
    pub standoff: f64,
}

impl FireTestSpec {
    /// 20A wood crib, 1270 × 1270 × 1725 mm, 1698 mm standoff.
    pub fn class_a() -> Self {
        FireTestSpec {
            class: FireClass::A,
            footprint: Footprint::Square {
                side: 1.27,
                height: 1.725,
            },
            standoff: 1.698,
        }
    }

    /// 233B pan, ø3000 × 203 mm, 1338 mm standoff.
    pub fn class_b() -> Self {
        FireTestSpec {
            class: FireClass::B,
            footprint: Footprint::Circle {
                diameter: 3.0,
                height: 0.203,
            },
            standoff: 1.338,
        }
    }

    pub fn for_class(class: FireClass) -> Self {
        match class {
            FireClass::A => Self::class_a(),
            FireClass::B => Self::class_b(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = match self.footprint {
            Footprint::Square { side, height } => [("side", side), ("height", height)],
            Footprint::Circle { diameter, height } => [("diameter", diameter), ("height", height)],
        };
        for (name, v) in dims.into_iter().chain([("standoff", self.standoff)]) {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(name, format!("fire test {name} {v} must be > 0")));
            }
        }
        Ok(())
    }

    /// Length of the closed path at constant standoff around the footprint.
    pub fn path_length(&self) -> f64 {
        match self.footprint {
            Footprint::Square { side, .. } => 4.0 * side + 2.0 * PI * self.standoff,
            Footprint::Circle { diameter, .. } => 2.0 * PI * (0.5 * diameter + self.standoff),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtinguisherKind {
    Portable,
    Wheeled,
}

impl fmt::Display for ExtinguisherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtinguisherKind::Portable => "portable",
            ExtinguisherKind::Wheeled => "wheeled",
        })
    }
}

impl FromStr for ExtinguisherKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "portable" => Ok(ExtinguisherKind::Portable),
            "wheeled" => Ok(ExtinguisherKind::Wheeled),
            other => Err(format!("unknown extinguisher type `{other}` (expected portable or wheeled)")),
        }
    }
}

/// A commercial extinguisher.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtinguisherSpec {
    pub model: String,
    pub kind: ExtinguisherKind,
    /// Rating label such as `20A/233B`.
    pub power: String,
    /// kg.
    pub mass: f64,
    /// Body diameter, m.
    pub diameter: f64,
    /// Body height, m.
    pub height: f64,
    /// m.
    pub hose_length: f64,
    /// s.
    pub discharge_time: f64,
    /// Operating temperature range, °C.
    pub temp_min: f64,
    pub temp_max: f64,
}

impl ExtinguisherSpec {
    #[allow(clippy::too_many_arguments)]
    fn row(
        model: &str,
        kind: ExtinguisherKind,
        power: &str,
        mass: f64,
        diameter_cm: f64,
        height_cm: f64,
        hose_length: f64,
        discharge_time: f64,
        temp_max: f64,
    ) -> Self {
        ExtinguisherSpec {
            model: model.to_string(),
            kind,
            power: power.to_string(),
            mass,
            diameter: diameter_cm / 100.0,
            height: height_cm / 100.0,
            hose_length,
            discharge_time,
            temp_min: -20.0,
            temp_max,
        }
    }

    /// The eight commercial models used to size the mission.
    pub fn presets() -> Vec<ExtinguisherSpec> {
        use ExtinguisherKind::{Portable, Wheeled};
        vec![
            Self::row("EXT-ABC-4K", Portable, "21A/133B", 6.1, 13.8, 44.0, 0.5, 15.0, 60.0),
            Self::row("MFZL4-ABC", Portable, "2A/55B", 5.5, 13.0, 48.0, 0.4, 13.0, 55.0),
            Self::row("MFZL8-ABC", Portable, "4A/89B", 10.0, 13.0, 56.5, 0.5, 15.0, 55.0),
            Self::row("MFZL10-ABC", Wheeled, "20A/233B", 45.0, 46.0, 92.0, 3.0, 20.0, 55.0),
            Self::row("EXT-CO2-5K", Portable, "55B", 16.8, 15.2, 67.0, 0.5, 15.0, 60.0),
            Self::row("CO2-MT24", Wheeled, "233B", 90.0, 22.0, 133.0, 3.0, 25.0, 55.0),
            Self::row("EXT-ABC-25K", Wheeled, "20A/89B", 50.0, 25.2, 88.0, 5.0, 20.0, 60.0),
            Self::row("EXT-ABC-50K", Wheeled, "20A/233B", 83.0, 30.0, 100.0, 5.0, 25.0, 60.0),
        ]
    }

    pub fn preset(model: &str) -> Option<ExtinguisherSpec> {
        Self::presets().into_iter().find(|e| e.model == model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.model.trim().is_empty() {
            return Err(Error::Config("extinguisher model name is empty".into()));
        }
        if !(self.discharge_time.is_finite() && self.discharge_time > 0.0) {
            return Err(Error::domain(
                "discharge_time",
                format!("{} s must be > 0", self.discharge_time),
            ));
        }
        if !(self.temp_min < self.temp_max) {
            return Err(Error::domain(
                "operating_temp",
                format!("range [{}, {}] is empty", self.temp_min, self.temp_max),
            ));
        }
        for (name, v) in [
            ("mass", self.mass),
            ("diameter", self.diameter),
            ("height", self.height),
            ("hose_length", self.hose_length),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(name, format!("{v} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// End-effector envelope the manipulator must cover. Metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachRequirements {
    pub highest_point: f64,
    pub lowest_point_a: f64,
    pub lowest_point_b: f64,
    pub longest_reach_a: f64,
    pub longest_reach_b: f64,
    pub shortest_edge_gap_a: f64,
}

impl Default for ReachRequirements {
    fn default() -> Self {
        ReachRequirements {
            highest_point: 1.892,
            lowest_point_a: 0.745,
            lowest_point_b: 0.635,
            longest_reach_a: 1.875,
            longest_reach_b: 2.255,
            shortest_edge_gap_a: 0.395,
        }
    }
}

/// Time to drive once around the fire test at speed `v`, s.
pub fn circumnavigation_time(test: &FireTestSpec, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain("v", format!("speed {v} must be > 0")));
    }
    test.validate()?;
    Ok(test.path_length() / v)
}

/// Passes when the lap finishes strictly before the extinguisher empties.
pub fn discharge_budget_check(test: &FireTestSpec, v: f64, ext: &ExtinguisherSpec) -> Result<CheckResult> {
    let t = circumnavigation_time(test, v)?;
    Ok(CheckResult::measured(
        CHECK_DISCHARGE,
        t < ext.discharge_time,
        t,
        ext.discharge_time,
        ext.discharge_time - t,
    )
    .with_note(format!("class {} lap vs {} discharge", test.class, ext.model)))
}

/// Passes when the chassis still accelerates on the required grade.
pub fn slope_climb_check(report: &PerformanceReport) -> Result<CheckResult> {
    if (report.state.theta - REQUIRED_SLOPE_DEG).abs() > 1e-12 {
        return Err(Error::domain(
            "theta",
            format!(
                "slope check needs a report at {REQUIRED_SLOPE_DEG} deg, got {}",
                report.state.theta
            ),
        ));
    }
    let a = report.acceleration;
    Ok(CheckResult::measured(CHECK_SLOPE, a >= 0.0, a, 0.0, a))
}

/// Per-row reach comparison; rows without a requirement for the class are n/a.
pub fn reach_check(
    robot_reach: f64,
    robot_max_height: f64,
    req: &ReachRequirements,
    class: FireClass,
) -> Vec<CheckResult> {
    let longest = match class {
        FireClass::A => req.longest_reach_a,
        FireClass::B => req.longest_reach_b,
    };
    let reach = CheckResult::measured(
        CHECK_REACH,
        robot_reach >= longest,
        robot_reach,
        longest,
        robot_reach - longest,
    );
    let height = match class {
        FireClass::A => CheckResult::measured(
            CHECK_HEIGHT,
            robot_max_height >= req.highest_point,
            robot_max_height,
            req.highest_point,
            robot_max_height - req.highest_point,
        ),
        FireClass::B => CheckResult::not_applicable(CHECK_HEIGHT, "no highest-point requirement for class B"),
    };
    vec![reach, height]
}

/// Passes when the rated range covers the required ambient range.
pub fn temperature_check(ext: &ExtinguisherSpec) -> CheckResult {
    let (lo, hi) = REQUIRED_TEMP_RANGE;
    let margin = (lo - ext.temp_min).min(ext.temp_max - hi);
    CheckResult::measured(
        CHECK_TEMPERATURE,
        ext.temp_min <= lo && ext.temp_max >= hi,
        ext.temp_min,
        lo,
        margin,
    )
    .with_note(format!(
        "{} rated {}..{} C, required {lo}..{hi} C",
        ext.model, ext.temp_min, ext.temp_max
    ))
}

/// Everything needed to judge a candidate robot against the mission.
#[derive(Debug, Clone, PartialEq)]
pub struct MissionSpec {
    pub fire_test: FireTestSpec,
    pub extinguisher: ExtinguisherSpec,
    pub robot_reach: f64,
    pub robot_max_height: f64,
    pub requirements: ReachRequirements,
}

/// Runs every mission check in a fixed order: pitch ratio, steering, slope
/// climb, discharge budget, reach rows, temperature.
pub fn check_mission(
    geom: &TrackGeometry,
    terrain: &TerrainParams,
    state: &VehicleOperatingState,
    options: impl Into<EvalOptions>,
    mission: &MissionSpec,
) -> Result<FeasibilityReport> {
    let options = options.into();
    mission.fire_test.validate().stage("fire_test")?;
    mission.extinguisher.validate().stage("extinguisher")?;
    let on_slope = VehicleOperatingState {
        theta: REQUIRED_SLOPE_DEG,
        ..*state
    };
    let report = evaluate(geom, terrain, &on_slope, options)?;

    let mut out = FeasibilityReport::default();
    for name in [CHECK_PITCH_RATIO, CHECK_STEERING] {
        if let Some(c) = report.check(name) {
            out.push(c.clone());
        }
    }
    out.push(slope_climb_check(&report)?);
    out.push(discharge_budget_check(&mission.fire_test, state.v, &mission.extinguisher).stage("discharge_budget")?);
    for c in reach_check(
        mission.robot_reach,
        mission.robot_max_height,
        &mission.requirements,
        mission.fire_test.class,
    ) {
        out.push(c);
    }
    out.push(temperature_check(&mission.extinguisher));
    Ok(out)
}
