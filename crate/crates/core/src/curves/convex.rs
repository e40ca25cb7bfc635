use super::{curve_metrics, nesting_tree_unchecked, validate_curves, Curve, CurveMetrics, JordanConfiguration, PolyCurve};
use crate::error::{Error, Result};
use crate::geometry::{Circle, Point};
use crate::trees::{depth_index, RootedTree};

/// A contracting polygon is subdivided so that no edge spans more than
/// `2π / ANGULAR_RESOLUTION` as seen from its center.
pub const ANGULAR_RESOLUTION: usize = 128;

const CONVEXITY_TOL: f64 = 1e-12;

/// Every turn is a strict left turn (normalized edge cross products above
/// `1e-12`) and the boundary winds exactly once.
pub fn is_convex(p: &PolyCurve) -> bool {
    let v = p.vertices();
    let n = v.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = v[(i + 1) % n] - v[i];
        let e1 = v[(i + 2) % n] - v[(i + 1) % n];
        let (l0, l1) = (e0.norm(), e1.norm());
        if l0 == 0.0 || l1 == 0.0 {
            return false;
        }
        let e0 = e0 * (1.0 / l0);
        let e1 = e1 * (1.0 / l1);
        let s = e0.cross(e1);
        if s <= CONVEXITY_TOL {
            return false;
        }
        turning += s.atan2(e0.dot(e1));
    }
    (turning - std::f64::consts::TAU).abs() < 1e-6
}

/// Precomputed data for the staged convex retraction of one configuration.
#[derive(Clone, Debug)]
pub struct ConvexRetraction {
    input: JordanConfiguration,
    tree: RootedTree,
    depths: Vec<usize>,
    stages: usize,
    metrics: Vec<CurveMetrics>,
    /// Strict descendants of each curve (0-based).
    descendants: Vec<Vec<usize>>,
}

impl ConvexRetraction {
    pub fn new(j: &JordanConfiguration) -> Result<Self> {
        let report = validate_curves(j);
        if !report.is_ok() {
            return Err(Error::InvalidConfiguration(format!("{report:?}")));
        }
        for (i, c) in j.curves.iter().enumerate() {
            if let Curve::Polygon(p) = c {
                if !is_convex(p) {
                    return Err(Error::NotConvex { index: i + 1 });
                }
            }
        }
        let tree = nesting_tree_unchecked(j)?;
        Self::with_tree(j, tree)
    }

    /// Skips validation; `tree` must be the nesting tree of `j` and every
    /// polygon must be star-shaped about its center with the inscribed
    /// circle inside.
    pub(crate) fn with_tree(j: &JordanConfiguration, tree: RootedTree) -> Result<Self> {
        let depth = depth_index(&tree);
        let metrics = j
            .curves
            .iter()
            .map(curve_metrics)
            .collect::<Result<Vec<_>>>()?;
        let n = j.len();
        let mut descendants = vec![Vec::new(); n];
        for v in 1..=n {
            let mut a = tree.parent(v);
            while a != 0 {
                descendants[a - 1].push(v - 1);
                a = tree.parent(a);
            }
        }
        Ok(Self {
            input: j.clone(),
            stages: if n == 0 { 0 } else { depth.dmax + 1 },
            depths: depth.depths,
            tree,
            metrics,
            descendants,
        })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    /// Number of stages, `dmax + 1`.
    pub fn stage_count(&self) -> usize {
        self.stages
    }

    pub fn input(&self) -> &JordanConfiguration {
        &self.input
    }

    /// Configuration at global time `t` in `[0, 1]`.
    pub fn frame(&self, t: f64) -> JordanConfiguration {
        let t = t.clamp(0.0, 1.0);
        let mut state = self.input.clone();
        if self.stages == 0 {
            return state;
        }
        let position = t * self.stages as f64;
        let done = (position.floor() as usize).min(self.stages);
        let local = if done == self.stages { 0.0 } else { position - done as f64 };
        for k in 0..done {
            self.apply_stage(&mut state, self.stages - k, 1.0);
        }
        if local > 0.0 {
            self.apply_stage(&mut state, self.stages - done, local);
        }
        state
    }

    /// `1 + stages * per_stage` frames at evenly spaced times, reusing each
    /// completed stage.
    pub fn frames(&self, per_stage: usize) -> Vec<JordanConfiguration> {
        let per_stage = per_stage.max(1);
        let mut out = vec![self.input.clone()];
        let mut state = self.input.clone();
        for k in 0..self.stages {
            let s = self.stages - k;
            for f in 1..per_stage {
                let mut frame = state.clone();
                self.apply_stage(&mut frame, s, f as f64 / per_stage as f64);
                out.push(frame);
            }
            self.apply_stage(&mut state, s, 1.0);
            out.push(state.clone());
        }
        out
    }

    /// Stage `s` at local time `tau`: curves of depth `s - 1` contract
    /// radially onto their inscribed circles and their descendants follow
    /// by a similarity about the contracting center.
    fn apply_stage(&self, state: &mut JordanConfiguration, s: usize, tau: f64) {
        for i in 0..self.input.len() {
            if self.depths[i] + 1 != s {
                continue;
            }
            let m = self.metrics[i];
            let (c, r, big_r) = (m.center, m.inradius, m.outradius);
            state.curves[i] = match &self.input.curves[i] {
                Curve::Round(circle) => Curve::Round(*circle),
                Curve::Polygon(_) if tau >= 1.0 => Curve::Round(Circle {
                    x: c.x,
                    y: c.y,
                    r,
                }),
                Curve::Polygon(p) => {
                    Curve::Polygon(contract_polygon(&densify_about(p, c), c, r, tau))
                }
            };
            if big_r == r {
                continue;
            }
            let factor = 1.0 - tau * (1.0 - r / big_r);
            for &j in &self.descendants[i] {
                state.curves[j] = match &state.curves[j] {
                    Curve::Round(q) => {
                        let q_center = c + (q.center() - c) * factor;
                        Curve::Round(Circle {
                            x: q_center.x,
                            y: q_center.y,
                            r: q.r * factor,
                        })
                    }
                    Curve::Polygon(p) => Curve::Polygon(PolyCurve::from_ccw_unchecked(
                        p.vertices().iter().map(|&q| c + (q - c) * factor).collect(),
                    )),
                };
            }
        }
    }
}

/// Subdivides edges so each spans at most `2π / ANGULAR_RESOLUTION`
/// around `c`.
fn densify_about(p: &PolyCurve, c: Point) -> Vec<Point> {
    let step = std::f64::consts::TAU / ANGULAR_RESOLUTION as f64;
    let mut out = Vec::with_capacity(p.len().max(ANGULAR_RESOLUTION) + p.len());
    for (a, b) in p.edges() {
        let (u, v) = (a - c, b - c);
        let span = u.cross(v).atan2(u.dot(v)).abs();
        let pieces = (span / step).ceil().max(1.0) as usize;
        for k in 0..pieces {
            out.push(a.lerp(b, k as f64 / pieces as f64));
        }
    }
    out
}

/// Moves each vertex toward `c` by `tau` times its excess distance over `r`.
fn contract_polygon(v: &[Point], c: Point, r: f64, tau: f64) -> PolyCurve {
    PolyCurve::from_ccw_unchecked(
        v.iter()
            .map(|&p| {
                let d = p - c;
                let len = d.norm();
                p - d * (tau * (len - r) / len)
            })
            .collect(),
    )
}

pub fn convex_retract_frame(j: &JordanConfiguration, t: f64) -> Result<JordanConfiguration> {
    Ok(ConvexRetraction::new(j)?.frame(t))
}

pub fn convex_retract_frames(j: &JordanConfiguration, per_stage: usize) -> Result<Vec<JordanConfiguration>> {
    Ok(ConvexRetraction::new(j)?.frames(per_stage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{curve_nesting_tree, is_round};

    fn ellipse(cx: f64, cy: f64, a: f64, b: f64, n: usize) -> Curve {
        Curve::polygon(
            (0..n)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / n as f64;
                    Point::new(cx + a * th.cos(), cy + b * th.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn convexity() {
        let Curve::Polygon(e) = ellipse(0., 0., 3., 1., 64) else { unreachable!() };
        assert!(is_convex(&e));
        let l = PolyCurve::new(
            [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]
                .iter()
                .map(|&(x, y)| Point::new(x, y))
                .collect(),
        )
        .unwrap();
        assert!(!is_convex(&l));
        let collinear = PolyCurve::new(
            [(0., 0.), (1., 0.), (2., 0.), (1., 1.)]
                .iter()
                .map(|&(x, y)| Point::new(x, y))
                .collect(),
        )
        .unwrap();
        assert!(!is_convex(&collinear));
    }

    #[test]
    fn single_square_rounds_to_incircle() {
        let sq = Curve::polygon(vec![
            Point::new(0., 0.),
            Point::new(2., 0.),
            Point::new(2., 2.),
            Point::new(0., 2.),
        ])
        .unwrap();
        let j = JordanConfiguration::new(vec![sq]);
        assert_eq!(convex_retract_frame(&j, 0.0).unwrap(), j);
        let end = convex_retract_frame(&j, 1.0).unwrap();
        assert_eq!(end.curves[0], Curve::circle(1., 1., 1.).unwrap());
        let mid = convex_retract_frame(&j, 0.5).unwrap();
        assert!(validate_curves(&mid).is_ok());
        assert!(!is_round(&mid.curves[0], 1e-3));
    }

    #[test]
    fn follower_scaling() {
        let j = JordanConfiguration::new(vec![
            ellipse(-4., 0., 3., 1., 256),
            Curve::circle(-2., 0., 0.25).unwrap(),
            Curve::circle(-5., 0., 0.75).unwrap(),
        ]);
        let rt = ConvexRetraction::new(&j).unwrap();
        assert_eq!(rt.stage_count(), 2);
        let end = rt.frame(1.0);
        let Curve::Round(outer) = end.curves[0] else { panic!() };
        assert!((outer.r - 1.0).abs() < 1e-3);
        let Curve::Round(inner) = end.curves[1] else { panic!() };
        assert!((inner.x + 10.0 / 3.0).abs() < 1e-3 && (inner.r - 0.25 / 3.0).abs() < 1e-3);
        for f in rt.frames(9) {
            assert!(validate_curves(&f).is_ok());
            assert_eq!(curve_nesting_tree(&f).unwrap(), *rt.tree());
        }
    }

    #[test]
    fn rejects_non_convex() {
        let l = Curve::polygon(
            [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]
                .iter()
                .map(|&(x, y)| Point::new(x, y))
                .collect(),
        )
        .unwrap();
        assert_eq!(
            convex_retract_frame(&JordanConfiguration::new(vec![l]), 0.5),
            Err(Error::NotConvex { index: 1 })
        );
    }
}
