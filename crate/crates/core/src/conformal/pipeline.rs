use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use super::disk_map::{build_disk_map, DiskMap};
use super::shrink::{rounding_h, solve_shrink_parameter, ShrinkParameter};
use crate::curves::{
    nesting_tree_unchecked, polygon_metrics, validate_curves, ConvexRetraction, Curve,
    JordanConfiguration, PolyCurve,
};
use crate::error::{Error, Result};
use crate::geometry::Circle;
use crate::trees::{depth_index, RootedTree};

/// Vertex budget for moving curves.
pub const FOLLOWER_BUDGET: usize = 128;

/// What happened in one stage, as written to the diagnostics document.
/// Curve indices are 1-based labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    pub stage: usize,
    pub active: Vec<usize>,
    pub followers: Vec<usize>,
    pub y: BTreeMap<usize, f64>,
    pub map_error: BTreeMap<usize, f64>,
}

#[derive(Clone, Debug)]
pub struct ConformalRetraction {
    pub tree: RootedTree,
    pub frames: Vec<JordanConfiguration>,
    pub stages: Vec<StageDiagnostics>,
}

/// Rounding data for one active curve.
struct ActivePlan {
    index: usize,
    map: DiskMap,
    y: ShrinkParameter,
    angles: Vec<f64>,
    followers: Vec<(usize, Vec<C>)>,
}

impl ActivePlan {
    fn new(index: usize, p: &PolyCurve, followers: &[usize], state: &JordanConfiguration) -> Result<Self> {
        let wrap = |e: Error| Error::DiskMap {
            index: index + 1,
            reason: e.to_string(),
        };
        let metrics = polygon_metrics(p).map_err(wrap)?;
        let map = build_disk_map(p, metrics.center).map_err(wrap)?;
        let y = solve_shrink_parameter(&map, metrics.inradius).map_err(wrap)?;
        let angles = fill_angles(map.vertex_angles(), FOLLOWER_BUDGET);
        let followers = followers
            .iter()
            .map(|&j| {
                let outline = state.curves[j].to_polygon(FOLLOWER_BUDGET).densified(FOLLOWER_BUDGET);
                let pre = outline
                    .vertices()
                    .iter()
                    .map(|&w| map.preimage_clamped(w))
                    .collect();
                (j, pre)
            })
            .collect();
        Ok(Self {
            index,
            map,
            y,
            angles,
            followers,
        })
    }

    /// Local stage time `tau` in `(0, 1]`: the first half shrinks the disk
    /// coordinate, the second half runs `h` from time 1 down to 0.
    fn apply(&self, frame: &mut JordanConfiguration, tau: f64) {
        let y = self.y.value();
        let m = &self.map;
        let boundary = self.angles.iter().map(|&a| C::from_polar(1.0, a));
        if tau <= 0.5 {
            let k = 1.0 - y * 2.0 * tau;
            let active = boundary.map(|z| m.eval_clamped(z * k)).collect();
            frame.curves[self.index] = Curve::Polygon(PolyCurve::from_ccw_unchecked(active));
            for (j, pre) in &self.followers {
                let moved = pre.iter().map(|&u| m.eval_clamped(u * k)).collect();
                frame.curves[*j] = Curve::Polygon(PolyCurve::from_ccw_unchecked(moved));
            }
            return;
        }
        let t = 2.0 - 2.0 * tau;
        if t <= 0.0 {
            let c = m.center();
            frame.curves[self.index] = Curve::Round(Circle {
                x: c.x,
                y: c.y,
                r: (1.0 - y) * m.derivative_at_center().re,
            });
        } else {
            let active = boundary.map(|z| rounding_h(m, self.y, t, z)).collect();
            frame.curves[self.index] = Curve::Polygon(PolyCurve::from_ccw_unchecked(active));
        }
        for (j, pre) in &self.followers {
            let moved = pre.iter().map(|&u| rounding_h(m, self.y, t, u)).collect();
            frame.curves[*j] = Curve::Polygon(PolyCurve::from_ccw_unchecked(moved));
        }
    }
}

/// Sorted angles with gaps of at most `2π / budget`, keeping `given`.
fn fill_angles(mut given: Vec<f64>, budget: usize) -> Vec<f64> {
    for a in given.iter_mut() {
        *a = a.rem_euclid(TAU);
    }
    given.sort_by(f64::total_cmp);
    given.dedup();
    if given.is_empty() {
        given.push(0.0);
    }
    let step = TAU / budget as f64;
    let mut out = Vec::with_capacity(given.len() + budget);
    for k in 0..given.len() {
        let a = given[k];
        let b = if k + 1 < given.len() { given[k + 1] } else { given[0] + TAU };
        let pieces = ((b - a) / step).ceil().max(1.0) as usize;
        for p in 0..pieces {
            out.push(a + (b - a) * p as f64 / pieces as f64);
        }
    }
    out
}

/// Runs the conformal rounding stages root level first, then the convex
/// retraction on whatever is not yet an exact circle. Returns
/// `1 + (dmax + 1) * frames_per_stage` frames (plus convex frames if any
/// curve is still polygonal at the end) and per-stage diagnostics.
pub fn conformal_retract_detailed(
    j: &JordanConfiguration,
    frames_per_stage: usize,
) -> Result<ConformalRetraction> {
    let report = validate_curves(j);
    if !report.is_ok() {
        return Err(Error::InvalidConfiguration(format!("{report:?}")));
    }
    let tree = nesting_tree_unchecked(j)?;
    let depth = depth_index(&tree);
    let fps = frames_per_stage.max(1);
    let mut state = j.clone();
    let mut frames = vec![state.clone()];
    let mut stages = Vec::new();
    if j.is_empty() {
        return Ok(ConformalRetraction { tree, frames, stages });
    }
    for k in 0..=depth.dmax {
        let active: Vec<usize> = (0..j.len()).filter(|&i| depth.depths[i] == k).collect();
        let mut plans = Vec::new();
        for &i in &active {
            if let Curve::Polygon(p) = &state.curves[i] {
                let followers: Vec<usize> = tree.descendants(i + 1).iter().map(|v| v - 1).collect();
                plans.push(ActivePlan::new(i, p, &followers, &state)?);
            }
        }
        for f in 1..=fps {
            let tau = f as f64 / fps as f64;
            let mut frame = state.clone();
            for plan in &plans {
                plan.apply(&mut frame, tau);
            }
            frames.push(frame);
        }
        state = frames.last().expect("at least one frame").clone();
        stages.push(StageDiagnostics {
            stage: k,
            active: active.iter().map(|i| i + 1).collect(),
            followers: plans
                .iter()
                .flat_map(|p| p.followers.iter().map(|(j, _)| j + 1))
                .collect(),
            y: plans.iter().map(|p| (p.index + 1, p.y.value())).collect(),
            map_error: plans
                .iter()
                .map(|p| (p.index + 1, p.map.boundary_error()))
                .collect(),
        });
    }
    if !state.all_round() {
        let convex = ConvexRetraction::with_tree(&state, tree.clone())?;
        frames.extend(convex.frames(fps).into_iter().skip(1));
    }
    Ok(ConformalRetraction { tree, frames, stages })
}

pub fn conformal_retract(j: &JordanConfiguration, frames_per_stage: usize) -> Result<Vec<JordanConfiguration>> {
    Ok(conformal_retract_detailed(j, frames_per_stage)?.frames)
}
