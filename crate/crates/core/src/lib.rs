//! Tractive performance of tracked chassis on soft soil.
//!
//! The pipeline runs from vehicle weight to ground pressure, Bekker static
//! sinkage, the four motion resistances (running gear, bulldozing,
//! compaction, grade) and the shear-limited soil thrust, ending in drawbar
//! pull and acceleration. On top of that sit mission checks for a
//! fire-extinguisher test robot and an exhaustive design sweep.

// Negated comparisons are how validation rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chassis;
pub mod checks;
pub mod config;
pub mod error;
pub mod golden;
pub mod mission;
pub mod quadrature;
pub mod resistance;
pub mod sweep;
pub mod terrain;
pub mod traction;

pub use chassis::{RatioBand, TrackGeometry};
pub use checks::{CheckResult, FeasibilityReport, Verdict};
pub use error::{Error, Result};
pub use mission::{ExtinguisherSpec, FireClass, FireTestSpec, MissionSpec, ReachRequirements};
pub use resistance::{CompactionMode, VehicleOperatingState};
pub use sweep::{DesignSpace, SweepResult};
pub use terrain::{KpSource, TerrainParams};
pub use traction::{evaluate, EvalOptions, PerformanceReport};
