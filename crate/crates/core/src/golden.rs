//! Printed reference values for the reference chassis and the tolerance each
//! is reproduced to.

use crate::traction::PerformanceReport;

pub struct ReferenceValue {
    pub name: &'static str,
    pub unit: &'static str,
    pub printed: f64,
    /// Relative tolerance.
    pub tolerance: f64,
    pub computed: fn(&PerformanceReport) -> f64,
}

impl ReferenceValue {
    pub fn relative_error(&self, report: &PerformanceReport) -> f64 {
        ((self.computed)(report) - self.printed) / self.printed
    }

    pub fn within(&self, report: &PerformanceReport) -> bool {
        self.relative_error(report).abs() <= self.tolerance
    }
}

/// The output column of the reference chassis table.
pub const REFERENCE_COLUMN: &[ReferenceValue] = &[
    ReferenceValue {
        name: "z_o",
        unit: "m",
        printed: 0.0024,
        tolerance: 0.05,
        computed: |r| r.z_o,
    },
    ReferenceValue {
        name: "R_in",
        unit: "N",
        printed: 431.2,
        tolerance: 0.005,
        computed: |r| r.resistances.internal,
    },
    ReferenceValue {
        name: "R_b",
        unit: "N",
        printed: 15.6,
        tolerance: 0.02,
        computed: |r| r.resistances.bulldozing,
    },
    ReferenceValue {
        name: "R_c",
        unit: "N",
        printed: 2.0,
        tolerance: 0.10,
        computed: |r| r.resistances.compaction,
    },
    ReferenceValue {
        name: "R_g",
        unit: "N",
        printed: 1471.5,
        tolerance: 0.005,
        computed: |r| r.resistances.grade,
    },
    ReferenceValue {
        name: "F",
        unit: "N",
        printed: 3597.9,
        tolerance: 0.005,
        computed: |r| r.thrust,
    },
    ReferenceValue {
        name: "a",
        unit: "m/s^2",
        printed: 5.6,
        tolerance: 0.02,
        computed: |r| r.acceleration,
    },
];

/// K_p as printed next to the reference column. It equals tan(π/4 + φ/2),
/// not its square.
pub const PRINTED_KP: f64 = 1.7;
/// Contact length as printed; 1.0 m is what reproduces the column.
pub const PRINTED_CONTACT_LENGTH: f64 = 0.1;
