//! Run configuration: a line-oriented `[section]` / `key = value` format.
//!
//! ```text
//! # comments start with '#'
//! [terrain]
//! preset = paper-soft-soil
//! kp_override = 1.7
//!
//! [chassis]
//! b = 180 mm
//! l = 1.0 m
//! ```
//!
//! Numbers may carry a unit suffix (`m`, `mm`, `kg`, `s`, `deg`, `kPa`,
//! `m/s`); values are converted to canonical units (m, kg, s, deg, kPa,
//! m/s) when parsed. Keys whose quantity has no listed unit take bare
//! numbers. `[extinguisher]` may repeat, one section per model.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::chassis::{RatioBand, TrackGeometry};
use crate::mission::{
    ExtinguisherKind, ExtinguisherSpec, FireClass, FireTestSpec, MissionSpec, ReachRequirements,
};
use crate::resistance::{CompactionMode, VehicleOperatingState, STANDARD_GRAVITY};
use crate::sweep::{Axis, Constraint, DesignSpace, Objective, SweepContext, Variable, DEFAULT_GRID_CAP};
use crate::terrain::TerrainParams;
use crate::traction::EvalOptions;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key `{key}` in [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: duplicate key `{key}` in [{section}]")]
    DuplicateKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: duplicate section [{name}]")]
    DuplicateSection { line: usize, name: String },
    #[error("line {line}: `{key}` has unit `{unit}`, expected {expected}")]
    UnitMismatch {
        line: usize,
        key: String,
        unit: String,
        expected: String,
    },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("missing required section(s): {}", .0.join(", "))]
    MissingSections(Vec<String>),
    #[error("[{section}] is missing required key `{key}`")]
    MissingKey { section: String, key: String },
    #[error("invalid `{field}`: {msg}")]
    Invariant { field: String, msg: String },
}

/// Physical dimension of a config value, used to check unit suffixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dim {
    Length,
    Mass,
    Time,
    Angle,
    Pressure,
    Speed,
    Plain,
}

impl Dim {
    fn describe(self) -> &'static str {
        match self {
            Dim::Length => "a length (m, mm)",
            Dim::Mass => "a mass (kg)",
            Dim::Time => "a time (s)",
            Dim::Angle => "an angle (deg)",
            Dim::Pressure => "a pressure (kPa)",
            Dim::Speed => "a speed (m/s)",
            Dim::Plain => "a bare number",
        }
    }
}

const UNITS: &[(&str, Dim, f64)] = &[
    ("m/s", Dim::Speed, 1.0),
    ("kPa", Dim::Pressure, 1.0),
    ("deg", Dim::Angle, 1.0),
    ("mm", Dim::Length, 1e-3),
    ("kg", Dim::Mass, 1.0),
    ("m", Dim::Length, 1.0),
    ("s", Dim::Time, 1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected text or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChassisConfig {
    pub geometry: TrackGeometry,
    pub ratio_band: RatioBand,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateConfig {
    pub state: VehicleOperatingState,
    pub compaction_mode: CompactionMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionConfig {
    pub fire_class: FireClass,
    /// Replaces the class default standoff when set, m.
    pub standoff: Option<f64>,
    pub extinguisher: String,
    pub robot_reach: f64,
    pub robot_max_height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Per-variable axes; `None` means fixed at the chassis/state value.
    pub axes: [Option<Axis>; 6],
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
    pub cap: u64,
    pub refine: Option<Variable>,
    /// Where to write the full CSV dump.
    pub dump: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<String>,
    pub verbose: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: OutputFormat::Text,
            path: None,
            verbose: false,
        }
    }
}

/// A fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub terrain: TerrainParams,
    pub chassis: ChassisConfig,
    pub state: StateConfig,
    pub mission: Option<MissionConfig>,
    pub sweep: Option<SweepConfig>,
    /// Models defined in the file, in addition to the built-in presets.
    pub extinguishers: Vec<ExtinguisherSpec>,
    pub output: OutputConfig,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// Key lookup over one section. Every key must be consumed; leftovers are
/// reported as unknown.
struct Fields<'a> {
    section: &'a Section,
    used: BTreeSet<usize>,
    defaults: &'a mut Vec<String>,
}

impl<'a> Fields<'a> {
    fn new(section: &'a Section, defaults: &'a mut Vec<String>) -> Result<Self, ConfigError> {
        let mut seen = BTreeSet::new();
        for e in &section.entries {
            if !seen.insert(e.key.as_str()) {
                return Err(ConfigError::DuplicateKey {
                    line: e.line,
                    section: section.name.clone(),
                    key: e.key.clone(),
                });
            }
        }
        Ok(Fields {
            section,
            used: BTreeSet::new(),
            defaults,
        })
    }

    fn raw(&mut self, key: &str) -> Option<&'a Entry> {
        let (idx, e) = self
            .section
            .entries
            .iter()
            .enumerate()
            .find(|(_, e)| e.key == key)?;
        self.used.insert(idx);
        Some(e)
    }

    fn num(&mut self, key: &str, dim: Dim) -> Result<Option<f64>, ConfigError> {
        self.raw(key)
            .map(|e| parse_quantity(&e.value, dim, key, e.line))
            .transpose()
    }

    fn num_or(&mut self, key: &str, dim: Dim, fallback: Option<f64>) -> Result<f64, ConfigError> {
        match (self.num(key, dim)?, fallback) {
            (Some(v), _) => Ok(v),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(self.missing(key)),
        }
    }

    fn num_default(&mut self, key: &str, dim: Dim, default: f64) -> Result<f64, ConfigError> {
        match self.num(key, dim)? {
            Some(v) => Ok(v),
            None => {
                self.defaults
                    .push(format!("[{}] {key} = {default}", self.section.name));
                Ok(default)
            }
        }
    }

    fn parsed<T>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: std::str::FromStr<Err = String>,
    {
        self.raw(key)
            .map(|e| {
                e.value.parse::<T>().map_err(|msg| ConfigError::BadValue {
                    line: e.line,
                    key: key.to_string(),
                    msg,
                })
            })
            .transpose()
    }

    fn text(&mut self, key: &str) -> Option<String> {
        self.raw(key).map(|e| e.value.clone())
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError::MissingKey {
            section: self.section.name.clone(),
            key: key.to_string(),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self
            .section
            .entries
            .iter()
            .enumerate()
            .find(|(i, _)| !self.used.contains(i))
        {
            Some((_, e)) => Err(ConfigError::UnknownKey {
                line: e.line,
                section: self.section.name.clone(),
                key: e.key.clone(),
            }),
            None => Ok(()),
        }
    }
}

fn parse_number(s: &str, key: &str, line: usize) -> Result<f64, ConfigError> {
    let v: f64 = s.trim().parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        msg: format!("`{}` is not a number", s.trim()),
    })?;
    if !v.is_finite() {
        return Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            msg: "value must be finite".into(),
        });
    }
    Ok(v)
}

fn parse_quantity(raw: &str, dim: Dim, key: &str, line: usize) -> Result<f64, ConfigError> {
    let s = raw.trim();
    if s.parse::<f64>().is_ok() {
        return parse_number(s, key, line);
    }
    // Longest suffix first so `mm` wins over `m` and `m/s` over `s`.
    for &(unit, udim, factor) in UNITS {
        if let Some(num) = s.strip_suffix(unit) {
            let num = num.trim_end();
            if num.parse::<f64>().is_err() {
                continue;
            }
            if udim != dim {
                return Err(ConfigError::UnitMismatch {
                    line,
                    key: key.to_string(),
                    unit: unit.to_string(),
                    expected: dim.describe().to_string(),
                });
            }
            return Ok(parse_number(num, key, line)? * factor);
        }
    }
    match s.split_once(char::is_whitespace) {
        Some((num, unit)) if num.parse::<f64>().is_ok() => Err(ConfigError::UnitMismatch {
            line,
            key: key.to_string(),
            unit: unit.trim().to_string(),
            expected: dim.describe().to_string(),
        }),
        _ => parse_number(s, key, line).map(|_| unreachable!()),
    }
}

fn parse_axis(raw: &str, dim: Dim, key: &str, line: usize) -> Result<Axis, ConfigError> {
    let Some((start, rest)) = raw.split_once("..") else {
        return Ok(Axis::Fixed(parse_quantity(raw, dim, key, line)?));
    };
    let (stop, step) = rest.split_once(" step ").ok_or_else(|| ConfigError::Syntax {
        line,
        msg: format!("range for `{key}` must read `<start> .. <stop> step <step>`"),
    })?;
    Ok(Axis::Range {
        start: parse_quantity(start, dim, key, line)?,
        stop: parse_quantity(stop, dim, key, line)?,
        step: parse_quantity(step, dim, key, line)?,
    })
}

fn parse_bool(raw: &str, key: &str, line: usize) -> Result<bool, ConfigError> {
    match raw {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        other => Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            msg: format!("`{other}` is not a boolean"),
        }),
    }
}

fn lex(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: "section header must end with ']'".into(),
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    msg: "empty section name".into(),
                });
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected `key = value`, found `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("invalid key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("`{key}` has no value"),
            });
        }
        let section = sections.last_mut().ok_or_else(|| ConfigError::Syntax {
            line,
            msg: "key outside of any section".into(),
        })?;
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(sections)
}

fn invariant(e: crate::error::Error, section: &str) -> ConfigError {
    match e {
        crate::error::Error::Domain { quantity, detail } => ConfigError::Invariant {
            field: format!("{section}.{quantity}"),
            msg: detail,
        },
        other => ConfigError::Invariant {
            field: section.to_string(),
            msg: other.to_string(),
        },
    }
}

fn preset_of<T>(
    f: &mut Fields<'_>,
    lookup: impl Fn(&str) -> Option<T>,
    names: &[&str],
) -> Result<Option<T>, ConfigError> {
    match f.raw("preset") {
        None => Ok(None),
        Some(e) => lookup(&e.value).map(Some).ok_or_else(|| ConfigError::BadValue {
            line: e.line,
            key: "preset".into(),
            msg: format!("unknown preset `{}` (known: {})", e.value, names.join(", ")),
        }),
    }
}

fn terrain_section(s: &Section, defaults: &mut Vec<String>) -> Result<TerrainParams, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let base = preset_of(&mut f, TerrainParams::preset, TerrainParams::PRESETS)?;
    let t = TerrainParams {
        n: f.num_or("n", Dim::Plain, base.map(|b| b.n))?,
        k_c: f.num_or("k_c", Dim::Plain, base.map(|b| b.k_c))?,
        k_phi: f.num_or("k_phi", Dim::Plain, base.map(|b| b.k_phi))?,
        c: f.num_or("c", Dim::Pressure, base.map(|b| b.c))?,
        phi: f.num_or("phi", Dim::Angle, base.map(|b| b.phi))?,
        gamma: f.num_or("gamma", Dim::Plain, base.map(|b| b.gamma))?,
        shear_k: f.num_or("K", Dim::Length, base.map(|b| b.shear_k))?,
        mu_t: f.num("mu_t", Dim::Plain)?.or(base.and_then(|b| b.mu_t)),
        f_r: f.num("f_r", Dim::Plain)?.or(base.and_then(|b| b.f_r)),
        kp_override: f.num("kp_override", Dim::Plain)?.or(base.and_then(|b| b.kp_override)),
    };
    f.finish()?;
    t.validate().map_err(|e| invariant(e, "terrain"))?;
    Ok(t)
}

fn chassis_section(s: &Section, defaults: &mut Vec<String>) -> Result<ChassisConfig, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let base = preset_of(&mut f, TrackGeometry::preset, TrackGeometry::PRESETS)?;
    let g = TrackGeometry {
        b: f.num_or("b", Dim::Length, base.map(|b| b.b))?,
        l: f.num_or("l", Dim::Length, base.map(|b| b.l))?,
        tread: f.num_or("B", Dim::Length, base.map(|b| b.tread))?,
        pitch: f.num_or("P", Dim::Length, base.map(|b| b.pitch))?,
        roadwheel_diameter: f.num_or("RD", Dim::Length, base.map(|b| b.roadwheel_diameter))?,
        roadwheel_spacing: match base {
            Some(b) => f.num_or("RS", Dim::Length, Some(b.roadwheel_spacing))?,
            None => f.num_default("RS", Dim::Length, 0.0)?,
        },
        sprocket_diameter: match base {
            Some(b) => f.num_or("D", Dim::Length, Some(b.sprocket_diameter))?,
            None => f.num_default("D", Dim::Length, 0.0)?,
        },
        speed_fluctuation: match base {
            Some(b) => f.num_or("delta", Dim::Plain, Some(b.speed_fluctuation))?,
            None => f.num_default("delta", Dim::Plain, 0.0)?,
        },
    };
    let band = RatioBand::default();
    let ratio_band = RatioBand {
        min: f.num_default("ratio_min", Dim::Plain, band.min)?,
        max: f.num_default("ratio_max", Dim::Plain, band.max)?,
    };
    f.finish()?;
    g.validate().map_err(|e| invariant(e, "chassis"))?;
    if !(ratio_band.min <= ratio_band.max) {
        return Err(ConfigError::Invariant {
            field: "chassis.ratio_min".into(),
            msg: format!("band [{}, {}] is empty", ratio_band.min, ratio_band.max),
        });
    }
    Ok(ChassisConfig {
        geometry: g,
        ratio_band,
    })
}

fn state_preset(name: &str) -> Option<VehicleOperatingState> {
    (name == "paper-state").then(VehicleOperatingState::paper_state)
}

fn state_section(s: &Section, defaults: &mut Vec<String>) -> Result<StateConfig, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let base = preset_of(&mut f, state_preset, &["paper-state"])?;
    let state = VehicleOperatingState {
        m: f.num_or("m", Dim::Mass, base.map(|b| b.m))?,
        v: f.num_or("v", Dim::Speed, base.map(|b| b.v))?,
        i: f.num_or("i", Dim::Plain, base.map(|b| b.i))?,
        theta: f.num_or("theta", Dim::Angle, base.map(|b| b.theta))?,
        g: f.num_default("g", Dim::Plain, STANDARD_GRAVITY)?,
    };
    let compaction_mode = match f.parsed::<CompactionMode>("compaction_mode")? {
        Some(m) => m,
        None => {
            f.defaults
                .push(format!("[state] compaction_mode = {}", CompactionMode::default()));
            CompactionMode::default()
        }
    };
    f.finish()?;
    state.validate().map_err(|e| invariant(e, "state"))?;
    Ok(StateConfig {
        state,
        compaction_mode,
    })
}

fn mission_section(s: &Section, defaults: &mut Vec<String>) -> Result<MissionConfig, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let fire_class = f
        .parsed::<FireClass>("fire_class")?
        .ok_or_else(|| f.missing("fire_class"))?;
    let m = MissionConfig {
        fire_class,
        standoff: f.num("standoff", Dim::Length)?,
        extinguisher: f.text("extinguisher").ok_or_else(|| f.missing("extinguisher"))?,
        robot_reach: f.num_or("robot_reach", Dim::Length, None)?,
        robot_max_height: f.num_or("robot_max_height", Dim::Length, None)?,
    };
    f.finish()?;
    for (name, v) in [
        ("robot_reach", Some(m.robot_reach)),
        ("robot_max_height", Some(m.robot_max_height)),
        ("standoff", m.standoff),
    ] {
        if let Some(v) = v {
            if !(v > 0.0) {
                return Err(ConfigError::Invariant {
                    field: format!("mission.{name}"),
                    msg: format!("{v} must be > 0"),
                });
            }
        }
    }
    Ok(m)
}

fn axis_dim(var: Variable) -> Dim {
    match var {
        Variable::B | Variable::L | Variable::Tread => Dim::Length,
        Variable::V => Dim::Speed,
        Variable::M => Dim::Mass,
        Variable::I => Dim::Plain,
    }
}

fn sweep_section(s: &Section, defaults: &mut Vec<String>) -> Result<SweepConfig, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let mut axes = [None; 6];
    for var in Variable::ALL {
        if let Some(e) = f.raw(var.key()) {
            axes[var as usize] = Some(parse_axis(&e.value, axis_dim(var), var.key(), e.line)?);
        }
    }
    let objective = match f.parsed::<Objective>("objective")? {
        Some(o) => o,
        None => {
            f.defaults
                .push(format!("[sweep] objective = {}", Objective::default()));
            Objective::default()
        }
    };
    let constraints = match f.raw("constraints") {
        None => {
            f.defaults
                .push("[sweep] constraints = pitch_ratio, steering, slope_climb, discharge_budget".into());
            Constraint::ALL.to_vec()
        }
        Some(e) if e.value == "none" => Vec::new(),
        Some(e) => {
            let mut out = e
                .value
                .split(',')
                .map(|c| {
                    c.trim().parse::<Constraint>().map_err(|msg| ConfigError::BadValue {
                        line: e.line,
                        key: "constraints".into(),
                        msg,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.sort();
            out.dedup();
            out
        }
    };
    let cap = match f.raw("cap") {
        None => DEFAULT_GRID_CAP,
        Some(e) => e.value.parse::<u64>().map_err(|_| ConfigError::BadValue {
            line: e.line,
            key: "cap".into(),
            msg: format!("`{}` is not a positive integer", e.value),
        })?,
    };
    let refine = match f.raw("refine") {
        None => None,
        Some(e) => Some(Variable::from_key(&e.value).ok_or_else(|| ConfigError::BadValue {
            line: e.line,
            key: "refine".into(),
            msg: format!("`{}` is not one of b, l, B, v, m, i", e.value),
        })?),
    };
    let dump = f.text("dump");
    f.finish()?;
    Ok(SweepConfig {
        axes,
        objective,
        constraints,
        cap,
        refine,
        dump,
    })
}

fn extinguisher_section(s: &Section, defaults: &mut Vec<String>) -> Result<ExtinguisherSpec, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let e = ExtinguisherSpec {
        model: f.text("model").ok_or_else(|| f.missing("model"))?,
        kind: f
            .parsed::<ExtinguisherKind>("type")?
            .ok_or_else(|| f.missing("type"))?,
        power: f.text("power").ok_or_else(|| f.missing("power"))?,
        mass: f.num_or("mass", Dim::Mass, None)?,
        diameter: f.num_or("diameter", Dim::Length, None)?,
        height: f.num_or("height", Dim::Length, None)?,
        hose_length: f.num_or("hose_length", Dim::Length, None)?,
        discharge_time: f.num_or("discharge_time", Dim::Time, None)?,
        temp_min: f.num_or("temp_min", Dim::Plain, None)?,
        temp_max: f.num_or("temp_max", Dim::Plain, None)?,
    };
    f.finish()?;
    e.validate().map_err(|err| invariant(err, "extinguisher"))?;
    Ok(e)
}

fn output_section(s: &Section, defaults: &mut Vec<String>) -> Result<OutputConfig, ConfigError> {
    let mut f = Fields::new(s, defaults)?;
    let format = f.parsed::<OutputFormat>("format")?.unwrap_or(OutputFormat::Text);
    let path = f.text("path");
    let verbose = match f.raw("verbose") {
        Some(e) => parse_bool(&e.value, "verbose", e.line)?,
        None => false,
    };
    f.finish()?;
    Ok(OutputConfig {
        format,
        path,
        verbose,
    })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_verbose(text).map(|(c, _)| c)
}

/// As [`parse_config`], also returning the defaults that were applied.
pub fn parse_config_verbose(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let sections = lex(text)?;
    let mut defaults = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &sections {
        if !matches!(
            s.name.as_str(),
            "terrain" | "chassis" | "state" | "mission" | "sweep" | "output" | "extinguisher"
        ) {
            return Err(ConfigError::UnknownSection {
                line: s.line,
                name: s.name.clone(),
            });
        }
        if s.name != "extinguisher" && !seen.insert(s.name.as_str()) {
            return Err(ConfigError::DuplicateSection {
                line: s.line,
                name: s.name.clone(),
            });
        }
    }
    let missing: Vec<String> = ["terrain", "chassis", "state"]
        .into_iter()
        .filter(|n| !seen.contains(n))
        .map(String::from)
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::MissingSections(missing));
    }
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    let terrain = terrain_section(find("terrain").expect("checked"), &mut defaults)?;
    let chassis = chassis_section(find("chassis").expect("checked"), &mut defaults)?;
    let state = state_section(find("state").expect("checked"), &mut defaults)?;
    let mission = find("mission")
        .map(|s| mission_section(s, &mut defaults))
        .transpose()?;
    let sweep = find("sweep")
        .map(|s| sweep_section(s, &mut defaults))
        .transpose()?;
    let output = find("output")
        .map(|s| output_section(s, &mut defaults))
        .transpose()?
        .unwrap_or_default();
    let extinguishers = sections
        .iter()
        .filter(|s| s.name == "extinguisher")
        .map(|s| extinguisher_section(s, &mut defaults))
        .collect::<Result<Vec<_>, _>>()?;

    let cfg = RunConfig {
        terrain,
        chassis,
        state,
        mission,
        sweep,
        extinguishers,
        output,
    };
    if let Some(m) = &cfg.mission {
        if cfg.extinguisher(&m.extinguisher).is_none() {
            return Err(ConfigError::Invariant {
                field: "mission.extinguisher".into(),
                msg: format!("unknown extinguisher model `{}`", m.extinguisher),
            });
        }
    }
    Ok((cfg, defaults))
}

/// Parses a file holding only `[extinguisher]` sections.
pub fn parse_extinguishers(text: &str) -> Result<Vec<ExtinguisherSpec>, ConfigError> {
    let mut defaults = Vec::new();
    lex(text)?
        .iter()
        .map(|s| {
            if s.name == "extinguisher" {
                extinguisher_section(s, &mut defaults)
            } else {
                Err(ConfigError::UnknownSection {
                    line: s.line,
                    name: s.name.clone(),
                })
            }
        })
        .collect()
}

impl RunConfig {
    /// The reference configuration with the printed K_p and the mission
    /// against the 233B pan and the MFZL10-ABC extinguisher.
    pub fn paper() -> Self {
        RunConfig {
            terrain: TerrainParams {
                kp_override: Some(1.7),
                ..TerrainParams::paper_soft_soil()
            },
            chassis: ChassisConfig {
                geometry: TrackGeometry::paper_chassis(),
                ratio_band: RatioBand::default(),
            },
            state: StateConfig {
                state: VehicleOperatingState::paper_state(),
                compaction_mode: CompactionMode::BekkerClassic,
            },
            mission: None,
            sweep: None,
            extinguishers: Vec::new(),
            output: OutputConfig::default(),
        }
    }

    /// A model defined in the file, else a built-in preset.
    pub fn extinguisher(&self, model: &str) -> Option<ExtinguisherSpec> {
        self.extinguishers
            .iter()
            .find(|e| e.model == model)
            .cloned()
            .or_else(|| ExtinguisherSpec::preset(model))
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            compaction_mode: self.state.compaction_mode,
            ratio_band: self.chassis.ratio_band,
            ..EvalOptions::default()
        }
    }

    pub fn mission_spec(&self) -> Result<MissionSpec, ConfigError> {
        let m = self.mission.as_ref().ok_or_else(|| ConfigError::MissingSections(vec!["mission".into()]))?;
        let mut fire_test = FireTestSpec::for_class(m.fire_class);
        if let Some(s) = m.standoff {
            fire_test.standoff = s;
        }
        Ok(MissionSpec {
            fire_test,
            extinguisher: self.extinguisher(&m.extinguisher).ok_or_else(|| ConfigError::Invariant {
                field: "mission.extinguisher".into(),
                msg: format!("unknown extinguisher model `{}`", m.extinguisher),
            })?,
            robot_reach: m.robot_reach,
            robot_max_height: m.robot_max_height,
            requirements: ReachRequirements::default(),
        })
    }

    /// Builds the design space and fixed context for a sweep.
    pub fn sweep_inputs(&self) -> Result<(DesignSpace, SweepContext), ConfigError> {
        let sw = self.sweep.as_ref().ok_or_else(|| ConfigError::MissingSections(vec!["sweep".into()]))?;
        let mut space = DesignSpace::point(&self.chassis.geometry, &self.state.state);
        for var in Variable::ALL {
            if let Some(axis) = sw.axes[var as usize] {
                space.set(var, axis);
            }
        }
        space.objective = sw.objective;
        space.constraints = sw.constraints.clone();
        space.cap = sw.cap;
        space.refine = sw.refine;
        let (fire_test, extinguishers) = match self.mission_spec() {
            Ok(m) => (Some(m.fire_test), vec![m.extinguisher]),
            Err(_) => (None, Vec::new()),
        };
        let ctx = SweepContext {
            base_geometry: self.chassis.geometry,
            terrain: self.terrain,
            base_state: self.state.state,
            options: self.eval_options(),
            fire_test,
            extinguishers,
        };
        Ok((space, ctx))
    }

    /// Canonical text: every key spelled out in canonical units, fixed order.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }
}

fn opt_line(out: &mut String, key: &str, v: Option<f64>) {
    if let Some(v) = v {
        let _ = writeln!(out, "{key} = {v}");
    }
}

fn axis_text(a: &Axis) -> String {
    match *a {
        Axis::Fixed(x) => x.to_string(),
        Axis::Range { start, stop, step } => format!("{start} .. {stop} step {step}"),
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let t = &self.terrain;
        let _ = writeln!(out, "[terrain]");
        let _ = writeln!(out, "n = {}\nk_c = {}\nk_phi = {}", t.n, t.k_c, t.k_phi);
        let _ = writeln!(out, "c = {} kPa\nphi = {} deg\ngamma = {}\nK = {} m", t.c, t.phi, t.gamma, t.shear_k);
        opt_line(&mut out, "mu_t", t.mu_t);
        opt_line(&mut out, "f_r", t.f_r);
        opt_line(&mut out, "kp_override", t.kp_override);

        let g = &self.chassis.geometry;
        let _ = writeln!(out, "\n[chassis]");
        let _ = writeln!(out, "b = {} m\nl = {} m\nB = {} m\nP = {} m", g.b, g.l, g.tread, g.pitch);
        let _ = writeln!(
            out,
            "RD = {} m\nRS = {} m\nD = {} m\ndelta = {}",
            g.roadwheel_diameter, g.roadwheel_spacing, g.sprocket_diameter, g.speed_fluctuation
        );
        let _ = writeln!(
            out,
            "ratio_min = {}\nratio_max = {}",
            self.chassis.ratio_band.min, self.chassis.ratio_band.max
        );

        let s = &self.state.state;
        let _ = writeln!(out, "\n[state]");
        let _ = writeln!(out, "m = {} kg\nv = {} m/s\ni = {}\ntheta = {} deg\ng = {}", s.m, s.v, s.i, s.theta, s.g);
        let _ = writeln!(out, "compaction_mode = {}", self.state.compaction_mode);

        if let Some(m) = &self.mission {
            let _ = writeln!(out, "\n[mission]");
            let _ = writeln!(out, "fire_class = {}", m.fire_class);
            if let Some(sd) = m.standoff {
                let _ = writeln!(out, "standoff = {sd} m");
            }
            let _ = writeln!(out, "extinguisher = {}", m.extinguisher);
            let _ = writeln!(out, "robot_reach = {} m\nrobot_max_height = {} m", m.robot_reach, m.robot_max_height);
        }

        if let Some(sw) = &self.sweep {
            let _ = writeln!(out, "\n[sweep]");
            for var in Variable::ALL {
                if let Some(a) = &sw.axes[var as usize] {
                    let _ = writeln!(out, "{} = {}", var.key(), axis_text(a));
                }
            }
            let _ = writeln!(out, "objective = {}", sw.objective);
            let cs: Vec<&str> = sw.constraints.iter().map(|c| c.as_str()).collect();
            let _ = writeln!(
                out,
                "constraints = {}",
                if cs.is_empty() { "none".to_string() } else { cs.join(", ") }
            );
            let _ = writeln!(out, "cap = {}", sw.cap);
            if let Some(r) = sw.refine {
                let _ = writeln!(out, "refine = {}", r.key());
            }
            if let Some(d) = &sw.dump {
                let _ = writeln!(out, "dump = {d}");
            }
        }

        for e in &self.extinguishers {
            let _ = writeln!(out, "\n[extinguisher]");
            let _ = writeln!(out, "model = {}\ntype = {}\npower = {}", e.model, e.kind, e.power);
            let _ = writeln!(
                out,
                "mass = {} kg\ndiameter = {} m\nheight = {} m\nhose_length = {} m\ndischarge_time = {} s",
                e.mass, e.diameter, e.height, e.hose_length, e.discharge_time
            );
            let _ = writeln!(out, "temp_min = {}\ntemp_max = {}", e.temp_min, e.temp_max);
        }

        let o = &self.output;
        let _ = writeln!(out, "\n[output]");
        let _ = writeln!(out, "format = {}", o.format.as_str());
        if let Some(p) = &o.path {
            let _ = writeln!(out, "path = {p}");
        }
        let _ = writeln!(out, "verbose = {}", o.verbose);
        f.write_str(&out)
    }
}
