//! Polygonal Jordan curves, their validity and nesting, and the convex
//! rounding retraction.

mod center;
mod convex;
mod predicates;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_pair, Circle, PairClass, Point, Similarity};
use crate::trees::RootedTree;

pub use center::{curve_center, curve_metrics, is_round, polygon_metrics, CurveMetrics};
pub use convex::{
    convex_retract_frame, convex_retract_frames, is_convex, ConvexRetraction,
    ANGULAR_RESOLUTION,
};
pub(crate) use predicates::point_segment_distance;

/// Closed simple polyline, stored counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Point>,
}

impl PolyCurve {
    /// Accepts at least three finite vertices; clockwise input is reversed.
    /// Simplicity is not checked here (see [`validate_curves`]).
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!(
                "a curve needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::Degenerate(format!("non-finite vertex {p:?}")));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    /// Regular `n`-gon inscribed in `circle`, first vertex at angle 0.
    pub fn regular(circle: &Circle, n: usize) -> Result<Self> {
        Self::new(circle.discretize(n))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        lo.dist(hi)
    }

    /// Strict interior test (boundary points are outside).
    pub fn contains(&self, p: Point) -> bool {
        if self.boundary_distance(p) == 0.0 {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_simple(&self) -> bool {
        predicates::polygon_is_simple(&self.vertices)
    }

    pub fn transformed(&self, g: &Similarity) -> PolyCurve {
        debug_assert!(g.scale > 0.0);
        PolyCurve::from_ccw_unchecked(self.vertices.iter().map(|&p| g.apply(p)).collect())
    }

    /// Splits every edge into pieces so the vertex count reaches at least
    /// `budget`; the geometry is unchanged.
    pub fn densified(&self, budget: usize) -> PolyCurve {
        if self.len() >= budget {
            return self.clone();
        }
        let perimeter = self.perimeter();
        let mut out = Vec::with_capacity(budget + self.len());
        for (a, b) in self.edges() {
            let pieces = ((a.dist(b) / perimeter) * budget as f64).ceil().max(1.0) as usize;
            for k in 0..pieces {
                out.push(a.lerp(b, k as f64 / pieces as f64));
            }
        }
        PolyCurve::from_ccw_unchecked(out)
    }
}

pub(crate) fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    // Relative to a vertex to avoid cancellation far from the origin.
    let o = v[0];
    let mut s = 0.0;
    for i in 0..n {
        s += (v[i] - o).cross(v[(i + 1) % n] - o);
    }
    0.5 * s
}

pub(crate) fn bbox(v: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in v {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// One member of a Jordan configuration: a polygon, or an exact circle
/// produced by rounding (or supplied as such).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveDoc", into = "CurveDoc")]
pub enum Curve {
    Polygon(PolyCurve),
    Round(Circle),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CurveDoc {
    Polygon { vertices: Vec<Point> },
    Round { circle: Circle },
}

impl TryFrom<CurveDoc> for Curve {
    type Error = Error;
    fn try_from(doc: CurveDoc) -> Result<Self> {
        match doc {
            CurveDoc::Polygon { vertices } => Ok(Curve::Polygon(PolyCurve::new(vertices)?)),
            CurveDoc::Round { circle } => {
                circle.check()?;
                Ok(Curve::Round(circle))
            }
        }
    }
}

impl From<Curve> for CurveDoc {
    fn from(c: Curve) -> Self {
        match c {
            Curve::Polygon(p) => CurveDoc::Polygon {
                vertices: p.vertices,
            },
            Curve::Round(circle) => CurveDoc::Round { circle },
        }
    }
}

impl Curve {
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Ok(Curve::Polygon(PolyCurve::new(vertices)?))
    }

    pub fn circle(x: f64, y: f64, r: f64) -> Result<Self> {
        Ok(Curve::Round(Circle::new(x, y, r)?))
    }

    pub fn area(&self) -> f64 {
        match self {
            Curve::Polygon(p) => p.area(),
            Curve::Round(c) => std::f64::consts::PI * c.r * c.r,
        }
    }

    /// A point on the curve.
    pub fn sample_point(&self) -> Point {
        match self {
            Curve::Polygon(p) => p.vertices[0],
            Curve::Round(c) => Point::new(c.x + c.r, c.y),
        }
    }

    /// Strict interior test.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Curve::Polygon(poly) => poly.contains(p),
            Curve::Round(c) => p.dist(c.center()) < c.r,
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match self {
            Curve::Polygon(p) => p.bbox(),
            Curve::Round(c) => (
                Point::new(c.x - c.r, c.y - c.r),
                Point::new(c.x + c.r, c.y + c.r),
            ),
        }
    }

    pub fn transformed(&self, g: &Similarity) -> Curve {
        match self {
            Curve::Polygon(p) => Curve::Polygon(p.transformed(g)),
            Curve::Round(c) => Curve::Round(g.apply_circle(c)),
        }
    }

    /// Vertices as drawn: the polygon itself, or `n` points on the circle.
    pub fn outline(&self, n: usize) -> Vec<Point> {
        match self {
            Curve::Polygon(p) => p.vertices.clone(),
            Curve::Round(c) => c.discretize(n),
        }
    }

    /// Polygonal view; circles are discretized with `n` vertices.
    pub fn to_polygon(&self, n: usize) -> PolyCurve {
        match self {
            Curve::Polygon(p) => p.clone(),
            Curve::Round(c) => PolyCurve::from_ccw_unchecked(c.discretize(n)),
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, Curve::Polygon(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JordanConfiguration {
    pub curves: Vec<Curve>,
}

impl JordanConfiguration {
    pub fn new(curves: Vec<Curve>) -> Self {
        Self { curves }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn transformed(&self, g: &Similarity) -> Self {
        Self::new(self.curves.iter().map(|c| c.transformed(g)).collect())
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        self.curves.iter().map(Curve::bbox).reduce(|(a, b), (c, d)| {
            (
                Point::new(a.x.min(c.x), a.y.min(c.y)),
                Point::new(b.x.max(d.x), b.y.max(d.y)),
            )
        })
    }

    pub fn diameter(&self) -> f64 {
        self.bbox().map_or(0.0, |(lo, hi)| lo.dist(hi))
    }

    pub fn all_round(&self) -> bool {
        self.curves.iter().all(|c| matches!(c, Curve::Round(_)))
    }
}

/// Problems found by [`validate_curves`]; indices are 1-based labels.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub degenerate: Vec<usize>,
    pub not_simple: Vec<usize>,
    pub intersecting_pairs: Vec<(usize, usize)>,
}

impl CurveReport {
    pub fn is_ok(&self) -> bool {
        self.degenerate.is_empty() && self.not_simple.is_empty() && self.intersecting_pairs.is_empty()
    }

    pub fn first_offender(&self) -> Option<usize> {
        self.degenerate
            .first()
            .or(self.not_simple.first())
            .copied()
            .or(self.intersecting_pairs.first().map(|p| p.0))
    }
}

pub fn validate_curves(j: &JordanConfiguration) -> CurveReport {
    let mut report = CurveReport::default();
    for (i, c) in j.curves.iter().enumerate() {
        match c {
            Curve::Polygon(p) => {
                if p.area() == 0.0 {
                    report.degenerate.push(i + 1);
                } else if !p.is_simple() {
                    report.not_simple.push(i + 1);
                }
            }
            Curve::Round(circle) => {
                if circle.check().is_err() {
                    report.degenerate.push(i + 1);
                }
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    let boxes: Vec<_> = j.curves.iter().map(Curve::bbox).collect();
    for a in 0..j.len() {
        for b in a + 1..j.len() {
            let (la, ha) = boxes[a];
            let (lb, hb) = boxes[b];
            if la.x > hb.x || lb.x > ha.x || la.y > hb.y || lb.y > ha.y {
                continue;
            }
            if curves_cross(&j.curves[a], &j.curves[b]) {
                report.intersecting_pairs.push((a + 1, b + 1));
            }
        }
    }
    report
}

fn curves_cross(a: &Curve, b: &Curve) -> bool {
    match (a, b) {
        (Curve::Round(x), Curve::Round(y)) => classify_pair(x, y) == PairClass::Intersecting,
        (Curve::Polygon(p), Curve::Round(c)) | (Curve::Round(c), Curve::Polygon(p)) => {
            predicates::circle_meets_polygon(c, p.vertices())
        }
        (Curve::Polygon(p), Curve::Polygon(q)) => {
            predicates::polygons_meet(p.vertices(), q.vertices())
        }
    }
}

/// Whether the region bounded by `inner` lies inside the region bounded by
/// `outer`. Assumes the two curves are disjoint.
pub fn nests(outer: &Curve, inner: &Curve) -> bool {
    match (outer, inner) {
        (Curve::Round(o), Curve::Round(i)) => classify_pair(i, o) == PairClass::NestedFirstInSecond,
        _ => outer.contains(inner.sample_point()),
    }
}

/// Labeled nesting tree of a valid configuration: the parent of curve `i` is
/// the innermost curve strictly containing it.
pub fn curve_nesting_tree(j: &JordanConfiguration) -> Result<RootedTree> {
    let report = validate_curves(j);
    if !report.is_ok() {
        return Err(Error::InvalidConfiguration(format!("{report:?}")));
    }
    nesting_tree_unchecked(j)
}

pub(crate) fn nesting_tree_unchecked(j: &JordanConfiguration) -> Result<RootedTree> {
    let n = j.len();
    let areas: Vec<f64> = j.curves.iter().map(Curve::area).collect();
    let mut parents = vec![0usize; n];
    for i in 0..n {
        let mut best: Option<usize> = None;
        for k in 0..n {
            if k != i && nests(&j.curves[k], &j.curves[i]) && best.is_none_or(|b| areas[k] < areas[b])
            {
                best = Some(k);
            }
        }
        parents[i] = best.map_or(0, |b| b + 1);
    }
    RootedTree::new(parents, true)
}
