//! Exhaustive grid sweep over chassis and operating variables.
//!
//! Points are evaluated in parallel chunks and merged strictly in grid-index
//! order, so the summary and the CSV dump do not depend on scheduling. Ties
//! on the objective go to the lexicographically smallest (b, l, B, v, m, i).

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chassis::TrackGeometry;
use crate::checks::{CheckResult, FeasibilityReport};
use crate::error::{Error, Result};
use crate::mission::{
    discharge_budget_check, slope_climb_check, ExtinguisherSpec, FireTestSpec, REQUIRED_SLOPE_DEG,
};
use crate::resistance::VehicleOperatingState;
use crate::terrain::TerrainParams;
use crate::traction::{evaluate, EvalOptions, PerformanceReport, CHECK_PITCH_RATIO, CHECK_STEERING};

pub const DEFAULT_GRID_CAP: u64 = 10_000_000;
pub const REFINE_TOL: f64 = 1e-4;
const CHUNK: usize = 1 << 14;

pub const CSV_HEADER: [&str; 17] = [
    "b", "l", "B", "v", "m", "i", "z_o", "R_in", "R_b", "R_c", "R_g", "F", "drawbar_pull", "a",
    "feasible", "failed_check", "objective",
];

/// Swept variables in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    B,
    L,
    Tread,
    V,
    M,
    I,
}

impl Variable {
    pub const ALL: [Variable; 6] = [
        Variable::B,
        Variable::L,
        Variable::Tread,
        Variable::V,
        Variable::M,
        Variable::I,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Variable::B => "b",
            Variable::L => "l",
            Variable::Tread => "B",
            Variable::V => "v",
            Variable::M => "m",
            Variable::I => "i",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.key() == key)
    }
}

/// One axis of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Fixed(f64),
    /// Inclusive range `start, start + step, ...` up to `stop`.
    Range { start: f64, stop: f64, step: f64 },
}

impl Axis {
    pub fn len(&self) -> u64 {
        match *self {
            Axis::Fixed(_) => 1,
            Axis::Range { start, stop, step } => ((stop - start) / step + 1e-9).floor() as u64 + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, k: u64) -> f64 {
        match *self {
            Axis::Fixed(x) => x,
            Axis::Range { start, step, .. } => start + k as f64 * step,
        }
    }

    fn validate(&self, var: Variable) -> Result<()> {
        match *self {
            Axis::Fixed(x) if x.is_finite() => Ok(()),
            Axis::Fixed(x) => Err(Error::Config(format!("{} = {x} is not finite", var.key()))),
            Axis::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return Err(Error::Config(format!("{} range must be finite", var.key())));
                }
                if !(step > 0.0) {
                    return Err(Error::Config(format!("{} step {step} must be > 0", var.key())));
                }
                if stop < start {
                    return Err(Error::Config(format!(
                        "{} range {start}..{stop} is empty",
                        var.key()
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    MaxAcceleration,
    MaxDrawbarPull,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::MaxAcceleration => "max_acceleration",
            Objective::MaxDrawbarPull => "max_drawbar_pull",
        }
    }

    fn of(self, report: &PerformanceReport) -> f64 {
        match self {
            Objective::MaxAcceleration => report.acceleration,
            Objective::MaxDrawbarPull => report.drawbar_pull,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max_acceleration" => Ok(Objective::MaxAcceleration),
            "max_drawbar_pull" => Ok(Objective::MaxDrawbarPull),
            other => Err(format!(
                "unknown objective `{other}` (expected max_acceleration or max_drawbar_pull)"
            )),
        }
    }
}

/// Feasibility constraints, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    PitchRatio,
    Steering,
    SlopeClimb,
    DischargeBudget,
}

impl Constraint {
    pub const ALL: [Constraint; 4] = [
        Constraint::PitchRatio,
        Constraint::Steering,
        Constraint::SlopeClimb,
        Constraint::DischargeBudget,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Constraint::PitchRatio => "pitch_ratio",
            Constraint::Steering => "steering",
            Constraint::SlopeClimb => "slope_climb",
            Constraint::DischargeBudget => "discharge_budget",
        }
    }
}

impl FromStr for Constraint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                format!("unknown constraint `{s}` (expected pitch_ratio, steering, slope_climb or discharge_budget)")
            })
    }
}

/// Grid definition plus what counts as feasible and what is maximized.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    /// Axes in [`Variable::ALL`] order.
    pub axes: [Axis; 6],
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
    pub cap: u64,
    /// Variable refined by golden-section search around the grid optimum.
    pub refine: Option<Variable>,
}

impl DesignSpace {
    /// A single-point space at the given geometry and state, all constraints on.
    pub fn point(geom: &TrackGeometry, state: &VehicleOperatingState) -> Self {
        DesignSpace {
            axes: [
                Axis::Fixed(geom.b),
                Axis::Fixed(geom.l),
                Axis::Fixed(geom.tread),
                Axis::Fixed(state.v),
                Axis::Fixed(state.m),
                Axis::Fixed(state.i),
            ],
            objective: Objective::default(),
            constraints: Constraint::ALL.to_vec(),
            cap: DEFAULT_GRID_CAP,
            refine: None,
        }
    }

    pub fn axis(&self, var: Variable) -> &Axis {
        &self.axes[var as usize]
    }

    pub fn set(&mut self, var: Variable, axis: Axis) {
        self.axes[var as usize] = axis;
    }

    /// Number of grid points, or `None` on overflow.
    pub fn grid_size(&self) -> Option<u64> {
        self.axes.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.len()))
    }

    pub fn validate(&self) -> Result<u64> {
        for var in Variable::ALL {
            self.axis(var).validate(var)?;
        }
        let size = self
            .grid_size()
            .filter(|&n| n <= self.cap)
            .ok_or_else(|| {
                Error::Config(format!(
                    "grid has {} points, above the cap of {}",
                    self.grid_size().map_or_else(|| "too many".to_string(), |n| n.to_string()),
                    self.cap
                ))
            })?;
        if let Some(var) = self.refine {
            if !matches!(self.axis(var), Axis::Range { .. }) {
                return Err(Error::Config(format!(
                    "refine variable {} is not swept",
                    var.key()
                )));
            }
        }
        Ok(size)
    }

    /// Values of the grid point with the given flat index; `b` varies slowest.
    pub fn point_at(&self, mut index: u64) -> [f64; 6] {
        let mut out = [0.0; 6];
        for k in (0..6).rev() {
            let n = self.axes[k].len();
            out[k] = self.axes[k].value(index % n);
            index /= n;
        }
        out
    }

    fn has(&self, c: Constraint) -> bool {
        self.constraints.contains(&c)
    }
}

/// Everything held fixed across the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepContext {
    /// Supplies P, RD, RS, D and the speed fluctuation.
    pub base_geometry: TrackGeometry,
    pub terrain: TerrainParams,
    /// Supplies theta and g.
    pub base_state: VehicleOperatingState,
    pub options: EvalOptions,
    pub fire_test: Option<FireTestSpec>,
    pub extinguishers: Vec<ExtinguisherSpec>,
}

impl SweepContext {
    fn inputs(&self, p: &[f64; 6]) -> (TrackGeometry, VehicleOperatingState) {
        let geom = TrackGeometry {
            b: p[0],
            l: p[1],
            tread: p[2],
            ..self.base_geometry
        };
        let state = VehicleOperatingState {
            v: p[3],
            m: p[4],
            i: p[5],
            ..self.base_state
        };
        (geom, state)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub index: u64,
    pub point: [f64; 6],
    pub report: PerformanceReport,
    pub feasibility: FeasibilityReport,
    pub failed_check: Option<&'static str>,
    /// Set only on feasible points.
    pub objective: Option<f64>,
}

impl Candidate {
    pub fn feasible(&self) -> bool {
        self.failed_check.is_none()
    }

    fn csv_record(&self) -> Vec<String> {
        let r = &self.report;
        let mut rec: Vec<String> = self.point.iter().map(|x| x.to_string()).collect();
        rec.extend(
            [
                r.z_o,
                r.resistances.internal,
                r.resistances.bulldozing,
                r.resistances.compaction,
                r.resistances.grade,
                r.thrust,
                r.drawbar_pull,
                r.acceleration,
            ]
            .iter()
            .map(|x| x.to_string()),
        );
        rec.push(self.feasible().to_string());
        rec.push(self.failed_check.unwrap_or("").to_string());
        rec.push(self.objective.map(|x| x.to_string()).unwrap_or_default());
        rec
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub total: u64,
    pub feasible: u64,
    /// `None` when no grid point satisfies every constraint.
    pub best: Option<Candidate>,
    /// Golden-section refinement of `best`, kept only if it is feasible and better.
    pub refined: Option<Candidate>,
    /// How many infeasible points each constraint rejected first.
    pub rejections: Vec<(&'static str, u64)>,
}

fn point_cmp(a: &[f64; 6], b: &[f64; 6]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Runs the sweep over a design space.
pub struct Sweep<'a> {
    space: &'a DesignSpace,
    ctx: &'a SweepContext,
    total: u64,
}

impl<'a> Sweep<'a> {
    pub fn new(space: &'a DesignSpace, ctx: &'a SweepContext) -> Result<Self> {
        let total = space.validate()?;
        if space.has(Constraint::Steering) && (ctx.terrain.mu_t.is_none() || ctx.terrain.f_r.is_none()) {
            return Err(Error::Config(
                "steering constraint needs mu_t and f_r in the terrain".into(),
            ));
        }
        if space.has(Constraint::DischargeBudget)
            && (ctx.fire_test.is_none() || ctx.extinguishers.is_empty())
        {
            return Err(Error::Config(
                "discharge_budget constraint needs a fire test and at least one extinguisher".into(),
            ));
        }
        ctx.terrain.validate()?;
        Ok(Sweep { space, ctx, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Evaluates one point at its given values.
    pub fn evaluate_values(&self, index: u64, point: [f64; 6]) -> Result<Candidate> {
        let ctx = self.ctx;
        let (geom, state) = ctx.inputs(&point);
        let report = evaluate(&geom, &ctx.terrain, &state, ctx.options)?;
        let mut feas = FeasibilityReport::default();
        for c in Constraint::ALL {
            if !self.space.has(c) {
                continue;
            }
            match c {
                Constraint::PitchRatio => feas.push(report.check(CHECK_PITCH_RATIO).cloned().expect("always present")),
                Constraint::Steering => feas.push(report.check(CHECK_STEERING).cloned().expect("always present")),
                Constraint::SlopeClimb => {
                    let check = if (state.theta - REQUIRED_SLOPE_DEG).abs() <= 1e-12 {
                        slope_climb_check(&report)?
                    } else {
                        let slope = VehicleOperatingState {
                            theta: REQUIRED_SLOPE_DEG,
                            ..state
                        };
                        slope_climb_check(&evaluate(&geom, &ctx.terrain, &slope, ctx.options)?)?
                    };
                    feas.push(check);
                }
                Constraint::DischargeBudget => {
                    let test = ctx.fire_test.as_ref().expect("checked in new");
                    let worst = ctx
                        .extinguishers
                        .iter()
                        .map(|e| discharge_budget_check(test, state.v, e))
                        .collect::<Result<Vec<CheckResult>>>()?
                        .into_iter()
                        .min_by(|a, b| a.margin.unwrap().total_cmp(&b.margin.unwrap()))
                        .expect("non-empty");
                    feas.push(worst);
                }
            }
        }
        let failed_check = feas.failures().next().map(|c| c.name);
        let objective = failed_check
            .is_none()
            .then(|| self.space.objective.of(&report));
        Ok(Candidate {
            index,
            point,
            report,
            feasibility: feas,
            failed_check,
            objective,
        })
    }

    pub fn evaluate_index(&self, index: u64) -> Result<Candidate> {
        self.evaluate_values(index, self.space.point_at(index))
    }

    /// Full sweep, parallel, streaming the CSV dump to `dump` when given.
    pub fn run(&self, dump: Option<&mut dyn Write>) -> Result<SweepResult> {
        let mut merger = Merger::new(self.total, dump)?;
        let mut start = 0u64;
        while start < self.total {
            let end = (start + CHUNK as u64).min(self.total);
            let batch: Vec<Candidate> = (start..end)
                .into_par_iter()
                .map(|k| self.evaluate_index(k))
                .collect::<Result<_>>()?;
            for c in batch {
                merger.accept(c)?;
            }
            start = end;
        }
        self.finish(merger)
    }

    /// Sequential sweep; reference for [`Sweep::run`].
    pub fn run_sequential(&self, dump: Option<&mut dyn Write>) -> Result<SweepResult> {
        let mut merger = Merger::new(self.total, dump)?;
        for k in 0..self.total {
            merger.accept(self.evaluate_index(k)?)?;
        }
        self.finish(merger)
    }

    /// Evaluates the grid in the given visiting order (a permutation of all
    /// indices), in parallel, then merges in index order.
    pub fn run_in_order(&self, order: &[u64], dump: Option<&mut dyn Write>) -> Result<SweepResult> {
        let mut seen = vec![false; self.total as usize];
        for &k in order {
            match seen.get_mut(k as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::Config(format!("order is not a permutation (index {k})"))),
            }
        }
        if order.len() as u64 != self.total {
            return Err(Error::Config("order is not a permutation (wrong length)".into()));
        }
        let mut rows: Vec<Candidate> = order
            .par_iter()
            .map(|&k| self.evaluate_index(k))
            .collect::<Result<_>>()?;
        rows.sort_by_key(|c| c.index);
        let mut merger = Merger::new(self.total, dump)?;
        for c in rows {
            merger.accept(c)?;
        }
        self.finish(merger)
    }

    fn finish(&self, merger: Merger<'_>) -> Result<SweepResult> {
        let mut result = merger.finish()?;
        if let (Some(var), Some(best)) = (self.space.refine, result.best.as_ref()) {
            result.refined = self.refine(var, best)?;
        }
        Ok(result)
    }

    /// Golden-section search on one variable within one grid step of the best
    /// point. Infeasible points score -inf.
    fn refine(&self, var: Variable, best: &Candidate) -> Result<Option<Candidate>> {
        let Axis::Range { start, stop, step } = *self.space.axis(var) else {
            return Ok(None);
        };
        let k = var as usize;
        let x0 = best.point[k];
        let (mut lo, mut hi) = ((x0 - step).max(start), (x0 + step).min(stop));
        let at = |x: f64| {
            let mut p = best.point;
            p[k] = x;
            p
        };
        let score = |x: f64| -> Result<f64> {
            let c = self.evaluate_values(best.index, at(x))?;
            Ok(c.objective.unwrap_or(f64::NEG_INFINITY))
        };
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (score(x1)?, score(x2)?);
        while hi - lo > REFINE_TOL {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = score(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = score(x2)?;
            }
        }
        let cand = self.evaluate_values(best.index, at(0.5 * (lo + hi)))?;
        Ok(match (cand.objective, best.objective) {
            (Some(new), Some(old)) if new > old => Some(cand),
            _ => None,
        })
    }
}

/// Folds candidates, which must arrive in index order, into a result.
struct Merger<'w> {
    total: u64,
    next: u64,
    feasible: u64,
    best: Option<Candidate>,
    rejections: Vec<(&'static str, u64)>,
    csv: Option<csv::Writer<&'w mut dyn Write>>,
}

impl<'w> Merger<'w> {
    fn new(total: u64, dump: Option<&'w mut dyn Write>) -> Result<Self> {
        let csv = match dump {
            Some(w) => {
                let mut wtr = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(w);
                wtr.write_record(CSV_HEADER).map_err(csv_err)?;
                Some(wtr)
            }
            None => None,
        };
        Ok(Merger {
            total,
            next: 0,
            feasible: 0,
            best: None,
            rejections: Constraint::ALL.iter().map(|c| (c.as_str(), 0)).collect(),
            csv,
        })
    }

    fn accept(&mut self, c: Candidate) -> Result<()> {
        debug_assert_eq!(c.index, self.next, "candidates must arrive in index order");
        self.next += 1;
        if let Some(w) = self.csv.as_mut() {
            w.write_record(c.csv_record()).map_err(csv_err)?;
        }
        match (c.failed_check, c.objective) {
            (Some(name), _) => {
                if let Some(slot) = self.rejections.iter_mut().find(|(n, _)| *n == name) {
                    slot.1 += 1;
                }
            }
            (None, Some(obj)) => {
                self.feasible += 1;
                let better = match &self.best {
                    None => true,
                    Some(b) => {
                        let bo = b.objective.expect("best is feasible");
                        obj > bo || (obj == bo && point_cmp(&c.point, &b.point) == Ordering::Less)
                    }
                };
                if better {
                    self.best = Some(c);
                }
            }
            (None, None) => unreachable!("feasible candidates carry an objective"),
        }
        Ok(())
    }

    fn finish(self) -> Result<SweepResult> {
        debug_assert_eq!(self.next, self.total);
        if let Some(mut w) = self.csv {
            w.flush().map_err(|e| Error::Config(format!("writing CSV dump: {e}")))?;
        }
        Ok(SweepResult {
            total: self.total,
            feasible: self.feasible,
            best: self.best,
            refined: None,
            rejections: self.rejections,
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("writing CSV dump: {e}"))
}

/// Convenience wrapper: parallel sweep with an optional CSV dump.
pub fn sweep(space: &DesignSpace, ctx: &SweepContext, dump: Option<&mut dyn Write>) -> Result<SweepResult> {
    Sweep::new(space, ctx)?.run(dump)
}
