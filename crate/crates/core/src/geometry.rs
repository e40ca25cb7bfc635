//! Round circles in the plane: pair predicates, validity and the nesting tree.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::RootedTree;

/// Default relative strictness margin of the pair predicates.
pub const DEFAULT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        Complex64::new(p.x, p.y)
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::new(z.re, z.im)
    }
}

/// Orientation-preserving similarity `z -> a z + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    pub scale: f64,
    pub angle: f64,
    pub shift: Point,
}

impl Similarity {
    pub fn new(scale: f64, angle: f64, shift: Point) -> Self {
        Self { scale, angle, shift }
    }

    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        Point::new(
            self.scale * (c * p.x - s * p.y) + self.shift.x,
            self.scale * (s * p.x + c * p.y) + self.shift.y,
        )
    }

    pub fn apply_circle(&self, c: &Circle) -> Circle {
        let p = self.apply(c.center());
        Circle {
            x: p.x,
            y: p.y,
            r: c.r * self.scale,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl Circle {
    pub fn new(x: f64, y: f64, r: f64) -> Result<Self> {
        let c = Circle { x, y, r };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.x.is_finite() && self.y.is_finite() && self.r.is_finite()) {
            return Err(Error::InvalidCircle(format!("non-finite field in {self:?}")));
        }
        if self.r <= 0.0 {
            return Err(Error::InvalidCircle(format!("radius {} is not positive", self.r)));
        }
        Ok(())
    }

    pub fn center(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// `n` points on the circle, counterclockwise, starting at angle 0.
    pub fn discretize(&self, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                Point::new(self.x + self.r * a.cos(), self.y + self.r * a.sin())
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairClass {
    NestedFirstInSecond,
    NestedSecondInFirst,
    Separate,
    Intersecting,
}

impl PairClass {
    pub fn swapped(self) -> PairClass {
        match self {
            PairClass::NestedFirstInSecond => PairClass::NestedSecondInFirst,
            PairClass::NestedSecondInFirst => PairClass::NestedFirstInSecond,
            other => other,
        }
    }
}

pub fn classify_pair(a: &Circle, b: &Circle) -> PairClass {
    classify_pair_with(a, b, DEFAULT_EPS)
}

/// Signs of `(ra - rb)^2 - d^2` and `(ra + rb)^2 - d^2`; values within
/// `eps * (ra + rb)^2` of zero count as touching.
pub fn classify_pair_with(a: &Circle, b: &Circle, eps: f64) -> PairClass {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let d2 = dx * dx + dy * dy;
    let margin = eps * (a.r + b.r) * (a.r + b.r);
    let diff = a.r - b.r;
    if diff * diff - d2 > margin {
        if a.r < b.r {
            PairClass::NestedFirstInSecond
        } else {
            PairClass::NestedSecondInFirst
        }
    } else if d2 - (a.r + b.r) * (a.r + b.r) > margin {
        PairClass::Separate
    } else {
        PairClass::Intersecting
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircleConfiguration {
    pub circles: Vec<Circle>,
}

impl CircleConfiguration {
    pub fn new(circles: Vec<Circle>) -> Self {
        Self { circles }
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn transformed(&self, g: &Similarity) -> Self {
        Self::new(self.circles.iter().map(|c| g.apply_circle(c)).collect())
    }
}

/// Problems found by [`validate_configuration`]. Indices are 1-based labels.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircleReport {
    pub invalid_circles: Vec<usize>,
    pub intersecting_pairs: Vec<(usize, usize)>,
}

impl CircleReport {
    pub fn is_ok(&self) -> bool {
        self.invalid_circles.is_empty() && self.intersecting_pairs.is_empty()
    }
}

pub fn validate_configuration(c: &CircleConfiguration) -> CircleReport {
    let mut report = CircleReport::default();
    for (i, circle) in c.circles.iter().enumerate() {
        if circle.check().is_err() {
            report.invalid_circles.push(i + 1);
        }
    }
    if !report.invalid_circles.is_empty() {
        return report;
    }
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if classify_pair(&c.circles[i], &c.circles[j]) == PairClass::Intersecting {
                report.intersecting_pairs.push((i + 1, j + 1));
            }
        }
    }
    report
}

/// Labeled nesting tree: the parent of circle `i` is the smallest circle
/// that nests it, or the root.
pub fn circle_nesting_tree(c: &CircleConfiguration) -> Result<RootedTree> {
    let report = validate_configuration(c);
    if !report.is_ok() {
        return Err(Error::InvalidConfiguration(format!("{report:?}")));
    }
    let n = c.len();
    let mut parents = vec![0usize; n];
    for i in 0..n {
        let mut best: Option<usize> = None;
        for j in 0..n {
            if i != j
                && classify_pair(&c.circles[i], &c.circles[j]) == PairClass::NestedFirstInSecond
                && best.is_none_or(|b| c.circles[j].r < c.circles[b].r)
            {
                best = Some(j);
            }
        }
        parents[i] = best.map_or(0, |b| b + 1);
    }
    RootedTree::new(parents, true)
}

/// Orders the children of every vertex by the lexicographic `(x, y)` order of
/// the circle centers.
pub fn planar_child_order(c: &CircleConfiguration, t: &RootedTree) -> Result<RootedTree> {
    if t.len() != c.len() {
        return Err(Error::Mismatch(format!(
            "tree has {} vertices, configuration has {} circles",
            t.len(),
            c.len()
        )));
    }
    let order = (0..=t.len())
        .map(|v| {
            let mut kids = t.children(v).to_vec();
            kids.sort_by(|&a, &b| {
                c.circles[a - 1]
                    .center()
                    .lex_cmp(&c.circles[b - 1].center())
            });
            kids
        })
        .collect();
    t.clone().with_child_order(order)
}
