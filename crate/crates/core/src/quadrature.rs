//! Adaptive Simpson quadrature.
//!
//! Each panel is split in half until the two-panel estimate agrees with the
//! one-panel estimate to within `15 * tol` (the Richardson bound for
//! Simpson's rule); the accepted value carries the Richardson correction.
//! The tolerance is halved with each split so that the accumulated error of
//! the whole integral stays under the requested absolute tolerance.

use crate::error::{Error, Result};

/// Absolute tolerance used by the compaction integral, in newtons.
pub const DEFAULT_ABS_TOL: f64 = 1e-9;
/// Maximum number of interval halvings along any branch.
pub const DEFAULT_MAX_DEPTH: u32 = 30;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-panel Richardson error estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
    pub max_depth_reached: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSimpson {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let fm = f(m);
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        }
    }
}

struct State {
    evaluations: usize,
    error_estimate: f64,
    max_depth_reached: u32,
}

impl AdaptiveSimpson {
    pub fn new(abs_tol: f64, max_depth: u32) -> Self {
        Self { abs_tol, max_depth }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol", format!("{} must be > 0", self.abs_tol)));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain("bounds", format!("[{a}, {b}] must be finite")));
        }
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error_estimate: 0.0,
                evaluations: 0,
                max_depth_reached: 0,
            });
        }
        let (fa, fb) = (f(a), f(b));
        let root = Panel::new(&f, a, b, fa, fb);
        let mut state = State {
            evaluations: 3,
            error_estimate: 0.0,
            max_depth_reached: 0,
        };
        let value = self.refine(&f, &root, self.abs_tol, 0, &mut state)?;
        Ok(Integral {
            value,
            error_estimate: state.error_estimate,
            evaluations: state.evaluations,
            max_depth_reached: state.max_depth_reached,
        })
    }

    fn refine<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        panel: &Panel,
        tol: f64,
        depth: u32,
        state: &mut State,
    ) -> Result<f64> {
        let m = 0.5 * (panel.a + panel.b);
        let left = Panel::new(f, panel.a, m, panel.fa, panel.fm);
        let right = Panel::new(f, m, panel.b, panel.fm, panel.fb);
        state.evaluations += 2;
        state.max_depth_reached = state.max_depth_reached.max(depth + 1);

        let halves = left.whole + right.whole;
        let delta = halves - panel.whole;
        // Roundoff floor: below a few ulps of the panel value the estimates
        // cannot be told apart.
        let floor = 64.0 * f64::EPSILON * halves.abs();
        if delta.abs() <= 15.0 * tol || delta.abs() <= floor {
            state.error_estimate += delta.abs() / 15.0;
            return Ok(halves + delta / 15.0);
        }
        if depth + 1 >= self.max_depth {
            return Err(Error::Quadrature {
                a: panel.a,
                b: panel.b,
                depth: depth + 1,
                estimate: halves,
                previous: panel.whole,
            });
        }
        let l = self.refine(f, &left, 0.5 * tol, depth + 1, state)?;
        let r = self.refine(f, &right, 0.5 * tol, depth + 1, state)?;
        Ok(l + r)
    }
}
