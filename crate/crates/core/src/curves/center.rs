use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{Curve, PolyCurve};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Center `c`, inradius `r` (distance from `c` to the curve) and outradius
/// `R` (largest distance from `c` to a vertex).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMetrics {
    pub center: Point,
    pub inradius: f64,
    pub outradius: f64,
}

impl CurveMetrics {
    /// `(R - r) / r`, zero for a circle.
    pub fn roundness(&self) -> f64 {
        (self.outradius - self.inradius) / self.inradius
    }
}

/// Area centroid when it lies strictly inside, else the interior point
/// farthest from the boundary.
pub fn curve_center(p: &PolyCurve) -> Result<Point> {
    let area = p.signed_area();
    if !(area > 0.0) {
        return Err(Error::Degenerate("polygon has zero area".into()));
    }
    let o = p.vertices()[0];
    let mut cx = 0.0;
    let mut cy = 0.0;
    for (a, b) in p.edges() {
        let (a, b) = (a - o, b - o);
        let w = a.cross(b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    let centroid = Point::new(o.x + cx / (6.0 * area), o.y + cy / (6.0 * area));
    let tol = 1e-9 * p.diameter();
    if p.contains(centroid) && p.boundary_distance(centroid) > tol {
        return Ok(centroid);
    }
    Ok(pole_of_inaccessibility(p, 1e-8 * p.diameter()))
}

pub fn polygon_metrics(p: &PolyCurve) -> Result<CurveMetrics> {
    let center = curve_center(p)?;
    let inradius = p.boundary_distance(center);
    let outradius = p
        .vertices()
        .iter()
        .map(|v| v.dist(center))
        .fold(0.0, f64::max);
    if !(inradius > 0.0) {
        return Err(Error::Degenerate("center lies on the curve".into()));
    }
    Ok(CurveMetrics {
        center,
        inradius,
        outradius,
    })
}

pub fn curve_metrics(c: &Curve) -> Result<CurveMetrics> {
    match c {
        Curve::Polygon(p) => polygon_metrics(p),
        Curve::Round(circle) => Ok(CurveMetrics {
            center: circle.center(),
            inradius: circle.r,
            outradius: circle.r,
        }),
    }
}

/// `(R - r) / r <= tol`.
pub fn is_round(c: &Curve, tol: f64) -> bool {
    match c {
        Curve::Round(_) => true,
        Curve::Polygon(_) => curve_metrics(c).is_ok_and(|m| m.roundness() <= tol),
    }
}

#[derive(Clone, Copy)]
struct Cell {
    center: Point,
    half: f64,
    dist: f64,
    potential: f64,
}

impl Cell {
    fn new(p: &PolyCurve, center: Point, half: f64) -> Self {
        let dist = signed_distance(p, center);
        Cell {
            center,
            half,
            dist,
            potential: dist + half * std::f64::consts::SQRT_2,
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.potential.total_cmp(&other.potential)
    }
}

fn signed_distance(p: &PolyCurve, q: Point) -> f64 {
    let d = p.boundary_distance(q);
    if p.contains(q) {
        d
    } else {
        -d
    }
}

/// Grid refinement with a best-first queue. Among equally deep candidates
/// the lexicographically smallest point wins.
fn pole_of_inaccessibility(p: &PolyCurve, precision: f64) -> Point {
    let (lo, hi) = p.bbox();
    let size = (hi.x - lo.x).min(hi.y - lo.y);
    let half = size / 2.0;
    let mut queue = BinaryHeap::new();
    let mut x = lo.x;
    while x < hi.x {
        let mut y = lo.y;
        while y < hi.y {
            queue.push(Cell::new(p, Point::new(x + half, y + half), half));
            y += size;
        }
        x += size;
    }
    let mut best = Cell::new(p, lo.lerp(hi, 0.5), 0.0);
    for v in p.vertices() {
        let c = Cell::new(p, *v, 0.0);
        if c.dist > best.dist {
            best = c;
        }
    }
    let mut budget = 200_000usize;
    while let Some(cell) = queue.pop() {
        let better = cell.dist > best.dist
            || (cell.dist == best.dist && cell.center.lex_cmp(&best.center) == Ordering::Less);
        if better {
            best = cell;
        }
        if cell.potential - best.dist <= precision || cell.half <= precision / 4.0 || budget == 0 {
            continue;
        }
        let h = cell.half / 2.0;
        for (dx, dy) in [(-h, -h), (h, -h), (-h, h), (h, h)] {
            queue.push(Cell::new(p, cell.center + Point::new(dx, dy), h));
        }
        budget -= 1;
    }
    best.center
}
