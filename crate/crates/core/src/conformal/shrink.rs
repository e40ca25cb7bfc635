use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::disk_map::DiskMap;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Below this time `rounding_h` switches to its linear limit.
pub const TAU_T: f64 = 1e-4;
/// Points of the time grid used for `M(y)`.
pub const TIME_GRID: usize = 33;
/// Uniform boundary angles used for `M(y)` (vertex angles are added).
pub const BOUNDARY_SAMPLES: usize = 128;
const BISECTION_BUDGET: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ShrinkParameter(f64);

impl ShrinkParameter {
    pub fn new(y: f64) -> Result<Self> {
        if (0.0..1.0).contains(&y) {
            Ok(Self(y))
        } else {
            Err(Error::OutOfRange(format!("shrink parameter {y} not in [0, 1)")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ShrinkParameter {
    type Error = Error;
    fn try_from(y: f64) -> Result<Self> {
        Self::new(y)
    }
}

impl From<ShrinkParameter> for f64 {
    fn from(y: ShrinkParameter) -> f64 {
        y.0
    }
}

/// `φ_y(s)(z) = (1 - y s) z`.
pub fn shrink_phi(y: ShrinkParameter, s: f64, z: C) -> C {
    z * (1.0 - y.0 * s)
}

/// `h(t, z) = c + (γ(t (1 - y) z) - c) / t`, and its limit
/// `c + (1 - y) γ'(0) z` for `t <= TAU_T`.
pub fn rounding_h(m: &DiskMap, y: ShrinkParameter, t: f64, z: C) -> Point {
    let c = m.center();
    let k = 1.0 - y.0;
    if t <= TAU_T {
        return c + Point::from(m.derivative_at_center() * z * k);
    }
    let g = m.eval_clamped(z * (t * k));
    if t == 1.0 {
        return g;
    }
    c + (g - c) * (1.0 / t)
}

/// Angles sampled on the unit circle when measuring `M(y)`.
pub fn boundary_angles(m: &DiskMap) -> Vec<f64> {
    let mut a: Vec<f64> = (0..BOUNDARY_SAMPLES)
        .map(|k| TAU * k as f64 / BOUNDARY_SAMPLES as f64)
        .collect();
    a.extend(m.vertex_angles());
    a
}

fn max_radius(m: &DiskMap, y: ShrinkParameter, t: f64, angles: &[f64]) -> f64 {
    let c = m.center();
    angles
        .iter()
        .map(|&a| rounding_h(m, y, t, C::from_polar(1.0, a)).dist(c))
        .fold(0.0, f64::max)
}

/// `M(y)`: the largest distance from the center over the time grid and
/// the given boundary angles.
pub fn shrink_supremum(m: &DiskMap, y: ShrinkParameter, time_grid: usize, angles: &[f64]) -> f64 {
    let steps = time_grid.max(2) - 1;
    (0..=steps)
        .map(|k| max_radius(m, y, k as f64 / steps as f64, angles))
        .fold(0.0, f64::max)
}

/// Solves `M(y) = r` by bisection.
///
/// The bracket is driven by the `t = 1` slice of the grid: the difference
/// quotient in `h` is holomorphic, so by the maximum principle every other
/// time slice is dominated by it. The full grid is then evaluated at the
/// returned `y`, and a full-grid bisection takes over if that check fails.
pub fn solve_shrink_parameter(m: &DiskMap, r: f64) -> Result<ShrinkParameter> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("inradius {r} is not positive")));
    }
    let angles = boundary_angles(m);
    let full = |y: f64| shrink_supremum(m, ShrinkParameter(y), TIME_GRID, &angles);
    let slice = |y: f64| max_radius(m, ShrinkParameter(y), 1.0, &angles);
    if full(0.0) <= r * (1.0 + 1e-6) {
        return Ok(ShrinkParameter(0.0));
    }
    let y = bisect(&slice, r)?;
    if (full(y) - r).abs() <= 1e-6 * r {
        return Ok(ShrinkParameter(y));
    }
    bisect(&full, r).map(ShrinkParameter)
}

fn bisect(f: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECTION_BUDGET {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v > r {
            lo = mid;
        } else {
            hi = mid;
        }
        if (v - r).abs() <= 1e-6 * r && hi - lo <= 1e-9 {
            return Ok(mid);
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    Err(Error::Numerical(format!(
        "shrink parameter bisection did not reach |M(y) - r| <= 1e-6 r (bracket [{lo}, {hi}])"
    )))
}
