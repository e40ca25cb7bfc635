//! Riemann maps from the unit disk onto polygonal domains, built with the
//! geodesic zipper: the boundary is "unzipped" onto the real line one node
//! at a time by elementary slit maps of the upper half-plane.

use num_complex::Complex64 as C;
use std::f64::consts::TAU;

use crate::curves::{point_segment_distance, PolyCurve};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Forward evaluation requires `|z| <= 1 - TAU_E`.
pub const TAU_E: f64 = 1e-9;
/// Default boundary tolerance relative to the domain diameter.
pub const BOUNDARY_TOL: f64 = 1e-3;

const INITIAL_NODES: usize = 128;
const MAX_NODES: usize = 6000;
const I: C = C { re: 0.0, im: 1.0 };

/// Square root with non-negative imaginary part.
fn sqrt_upper(z: C) -> C {
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Slit map of the upper half-plane removing the arc from 0 to `a`:
/// `T(z) = z / (1 - z ic)`, `f(z) = sqrt(T^2 + d^2)`.
#[derive(Clone, Copy, Debug)]
struct Slit {
    ic: f64,
    d: f64,
}

impl Slit {
    fn through(a: C) -> Option<Self> {
        let n = a.norm_sqr();
        if !(a.im > 0.0) || !n.is_finite() {
            return None;
        }
        Some(Slit {
            ic: a.re / n,
            d: n / a.im,
        })
    }

    fn forward(&self, z: C) -> C {
        let t = z / (1.0 - z * self.ic);
        sqrt_upper(t * t + self.d * self.d)
    }

    fn forward_with_derivative(&self, z: C) -> (C, C) {
        let den = 1.0 - z * self.ic;
        let t = z / den;
        let f = sqrt_upper(t * t + self.d * self.d);
        (f, t / (den * den * f))
    }

    fn inverse(&self, u: C) -> C {
        let t = sqrt_upper(u * u - self.d * self.d);
        t / (1.0 + t * self.ic)
    }

    /// Boundary behavior on the extended real line. The base of the slit
    /// (`x = 0`) is taken from the left, which is the side of the domain.
    fn forward_real(&self, x: f64) -> f64 {
        let t = if x.is_infinite() {
            if self.ic != 0.0 {
                -1.0 / self.ic
            } else {
                x
            }
        } else {
            let den = 1.0 - x * self.ic;
            if den == 0.0 {
                return f64::INFINITY;
            }
            x / den
        };
        if t.is_infinite() {
            return f64::INFINITY;
        }
        let f = (t * t + self.d * self.d).sqrt();
        if t > 0.0 {
            f
        } else {
            -f
        }
    }
}

/// Conformal map `γ` from the unit disk onto the interior of a polygon,
/// normalized by `γ(0) = center` and `γ'(0) > 0`.
#[derive(Clone, Debug)]
pub struct DiskMap {
    domain: PolyCurve,
    center: Point,
    z0: C,
    z1: C,
    slits: Vec<Slit>,
    /// Real image of the first node after all slits (possibly infinite).
    zeta_end: f64,
    sign: f64,
    /// Image of the center in the upper half-plane.
    w: C,
    rotation: C,
    derivative: f64,
    nodes: Vec<Point>,
    node_angles: Vec<f64>,
    vertex_nodes: Vec<usize>,
    boundary_error: f64,
}

impl DiskMap {
    pub fn domain(&self) -> &PolyCurve {
        &self.domain
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// `γ'(0)`, a positive real number.
    pub fn derivative_at_center(&self) -> C {
        C::new(self.derivative, 0.0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Disk angles of the boundary nodes, in node order.
    pub fn node_angles(&self) -> &[f64] {
        &self.node_angles
    }

    /// Disk angles of the polygon vertices.
    pub fn vertex_angles(&self) -> Vec<f64> {
        self.vertex_nodes.iter().map(|&k| self.node_angles[k]).collect()
    }

    /// Largest distance from a sampled boundary image to its polygon edge.
    pub fn boundary_error(&self) -> f64 {
        self.boundary_error
    }

    fn final_forward(&self, u: C) -> (C, C) {
        let (m, dm) = if self.zeta_end.is_finite() {
            let den = 1.0 - u / self.zeta_end;
            (u / den, 1.0 / (den * den))
        } else {
            (u, C::new(1.0, 0.0))
        };
        (m * m * self.sign, m * dm * 2.0 * self.sign)
    }

    fn final_inverse(&self, v: C) -> C {
        let m = if self.sign > 0.0 { v.sqrt() } else { -(-v).sqrt() };
        if self.zeta_end.is_finite() {
            m / (1.0 + m / self.zeta_end)
        } else {
            m
        }
    }

    fn final_real(&self, x: f64) -> f64 {
        let m = if !self.zeta_end.is_finite() {
            x
        } else if x.is_infinite() {
            -self.zeta_end
        } else {
            let den = 1.0 - x / self.zeta_end;
            if den == 0.0 {
                return f64::INFINITY;
            }
            x / den
        };
        self.sign * m * m
    }

    /// Map from the domain to the upper half-plane, with its derivative.
    fn zip(&self, z: C) -> (C, C) {
        let num = z - self.z1;
        let den = z - self.z0;
        let m = num / den;
        let s = m.sqrt();
        let mut u = I * s;
        let mut du = I * (self.z1 - self.z0) / (den * den * s * 2.0);
        for slit in &self.slits {
            let (f, df) = slit.forward_with_derivative(u);
            u = f;
            du *= df;
        }
        let (v, dv) = self.final_forward(u);
        (v, du * dv)
    }

    fn zip_value(&self, z: C) -> C {
        let mut u = I * ((z - self.z1) / (z - self.z0)).sqrt();
        for slit in &self.slits {
            u = slit.forward(u);
        }
        self.final_forward(u).0
    }

    fn unzip(&self, v: C) -> C {
        let mut u = self.final_inverse(v);
        for slit in self.slits.iter().rev() {
            u = slit.inverse(u);
        }
        let m = -(u * u);
        (m * self.z0 - self.z1) / (m - 1.0)
    }

    fn to_disk(&self, v: C) -> C {
        self.rotation * (v - self.w) / (v - self.w.conj())
    }

    fn from_disk(&self, z: C) -> C {
        let q = z / self.rotation;
        (self.w - q * self.w.conj()) / (1.0 - q)
    }

    /// `γ(z)` without the domain guard; `z` must lie in the open disk.
    pub(crate) fn eval(&self, z: C) -> Point {
        if z == C::new(0.0, 0.0) {
            return self.center;
        }
        self.unzip(self.from_disk(z)).into()
    }

    /// `γ(z)` with `z` pulled radially inside the evaluation guard.
    pub(crate) fn eval_clamped(&self, z: C) -> Point {
        let r = z.norm();
        if r > 1.0 - TAU_E {
            self.eval(z * ((1.0 - TAU_E) / r))
        } else {
            self.eval(z)
        }
    }

    /// `γ^{-1}(w)`, pulled inside the evaluation guard. Points in the thin
    /// sliver between the polygon and the numerical boundary land there.
    pub(crate) fn preimage_clamped(&self, w: Point) -> C {
        let u = self.to_disk(self.zip_value(w.into()));
        let r = u.norm();
        if r > 1.0 - TAU_E {
            u * ((1.0 - TAU_E) / r)
        } else {
            u
        }
    }
}

pub fn map_forward(m: &DiskMap, z: C) -> Result<Point> {
    if !(z.norm() <= 1.0 - TAU_E) {
        return Err(Error::OutsideDomain(format!(
            "|z| = {} exceeds 1 - {TAU_E}",
            z.norm()
        )));
    }
    Ok(m.eval(z))
}

pub fn map_inverse(m: &DiskMap, w: Point) -> Result<C> {
    if !m.domain.contains(w) {
        return Err(Error::OutsideDomain(format!("{w:?} is not inside the domain")));
    }
    if w == m.center {
        return Ok(C::new(0.0, 0.0));
    }
    Ok(m.preimage_clamped(w))
}

/// Initial nodes: every vertex, plus edge subdivisions so that no gap
/// exceeds `perimeter / INITIAL_NODES`. Returns the nodes and the indices of
/// the original vertices.
fn initial_nodes(p: &PolyCurve) -> (Vec<Point>, Vec<usize>) {
    let step = p.perimeter() / INITIAL_NODES as f64;
    let mut nodes = Vec::new();
    let mut vertex_nodes = Vec::new();
    for (a, b) in p.edges() {
        vertex_nodes.push(nodes.len());
        let pieces = (a.dist(b) / step).ceil().max(1.0) as usize;
        for k in 0..pieces {
            nodes.push(a.lerp(b, k as f64 / pieces as f64));
        }
    }
    (nodes, vertex_nodes)
}

fn zip_nodes(
    domain: &PolyCurve,
    center: Point,
    nodes: &[Point],
    vertex_nodes: &[usize],
) -> Result<DiskMap> {
    let n = nodes.len();
    let z0: C = nodes[0].into();
    let z1: C = nodes[1].into();
    let mut pending: Vec<C> = nodes[2..]
        .iter()
        .map(|&p| I * ((C::from(p) - z1) / (C::from(p) - z0)).sqrt())
        .collect();
    // Real images of node 0 and of every node already unzipped.
    let mut reals = vec![0.0; n];
    reals[0] = f64::INFINITY;
    let mut slits = Vec::with_capacity(n - 2);
    for k in 2..n {
        let a = pending[k - 2];
        let slit = Slit::through(a).ok_or_else(|| {
            Error::Numerical(format!("node {k} left the upper half-plane ({a})"))
        })?;
        for x in reals.iter_mut().take(k) {
            *x = slit.forward_real(*x);
        }
        reals[k] = 0.0;
        for u in pending.iter_mut().skip(k - 1) {
            *u = slit.forward(*u);
        }
        slits.push(slit);
    }
    let mut map = DiskMap {
        domain: domain.clone(),
        center,
        z0,
        z1,
        slits,
        zeta_end: reals[0],
        sign: 1.0,
        w: C::new(0.0, 0.0),
        rotation: C::new(1.0, 0.0),
        derivative: 0.0,
        nodes: nodes.to_vec(),
        node_angles: Vec::new(),
        vertex_nodes: vertex_nodes.to_vec(),
        boundary_error: f64::INFINITY,
    };
    let (v, _) = map.zip(center.into());
    if v.im < 0.0 {
        map.sign = -1.0;
    }
    let (w, dw) = map.zip(center.into());
    if !(w.im > 0.0) || !dw.is_finite() || dw == C::new(0.0, 0.0) {
        return Err(Error::Numerical(format!("center maps to {w}")));
    }
    let scaled = I * (2.0 * w.im) / dw;
    map.w = w;
    map.rotation = C::from_polar(1.0, scaled.arg());
    map.derivative = scaled.norm();
    map.node_angles = reals
        .iter()
        .map(|&x| {
            let v = map.final_real(x);
            if v.is_finite() {
                map.to_disk(C::new(v, 0.0)).arg()
            } else {
                map.rotation.arg()
            }
        })
        .collect();
    Ok(map)
}

/// Ccw angular gap from `a` to `b` in `[0, 2π)`. Crowded nodes can share an
/// angle or come out a rounding error out of order; both count as zero.
fn gap(a: f64, b: f64) -> f64 {
    let g = (b - a).rem_euclid(TAU);
    if g > TAU - 1e-9 {
        0.0
    } else {
        g
    }
}

/// Builds `γ` for the interior of `p` with `γ(0) = center`, refining the
/// boundary nodes until every sampled boundary image lies within
/// `BOUNDARY_TOL · diameter / 2` of its polygon edge.
pub fn build_disk_map(p: &PolyCurve, center: Point) -> Result<DiskMap> {
    build_disk_map_with(p, center, BOUNDARY_TOL)
}

pub fn build_disk_map_with(p: &PolyCurve, center: Point, rel_tol: f64) -> Result<DiskMap> {
    if !p.contains(center) {
        return Err(Error::OutsideDomain(format!(
            "center {center:?} is not inside the curve"
        )));
    }
    let tol = rel_tol * p.diameter() / 2.0;
    let (mut nodes, mut vertex_nodes) = initial_nodes(p);
    loop {
        let mut map = zip_nodes(p, center, &nodes, &vertex_nodes)?;
        let n = nodes.len();
        let mut bad = Vec::new();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (a, b) = (map.node_angles[k], map.node_angles[(k + 1) % n]);
            let mid = a + gap(a, b) / 2.0;
            let q = map.eval_clamped(C::from_polar(1.0, mid));
            let err = point_segment_distance(q, nodes[k], nodes[(k + 1) % n]);
            worst = worst.max(err);
            if !(err <= tol) {
                bad.push(k);
            }
        }
        if bad.is_empty() {
            map.boundary_error = worst;
            return Ok(map);
        }
        if n + bad.len() > MAX_NODES {
            return Err(Error::Numerical(format!(
                "boundary error {worst:.3e} above {tol:.3e} with {n} nodes"
            )));
        }
        let mut refined = Vec::with_capacity(n + bad.len());
        let mut refined_vertices = Vec::with_capacity(vertex_nodes.len());
        let mut next_bad = bad.iter().peekable();
        let mut next_vertex = vertex_nodes.iter().peekable();
        for k in 0..n {
            if next_vertex.peek() == Some(&&k) {
                refined_vertices.push(refined.len());
                next_vertex.next();
            }
            refined.push(nodes[k]);
            if next_bad.peek() == Some(&&k) {
                refined.push(nodes[k].lerp(nodes[(k + 1) % n], 0.5));
                next_bad.next();
            }
        }
        nodes = refined;
        vertex_nodes = refined_vertices;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Circle;

    fn square(side: f64) -> PolyCurve {
        PolyCurve::new(vec![
            Point::new(0., 0.),
            Point::new(side, 0.),
            Point::new(side, side),
            Point::new(0., side),
        ])
        .unwrap()
    }

    #[test]
    fn slit_inverse_and_tip() {
        let s = Slit::through(C::new(0.3, 0.8)).unwrap();
        assert!(s.forward(C::new(0.3, 0.8)).norm() < 1e-6);
        let z = C::new(-0.7, 1.3);
        assert!((s.inverse(s.forward(z)) - z).norm() < 1e-12);
    }

    #[test]
    fn disk_domain_is_nearly_identity() {
        let p = PolyCurve::regular(&Circle::new(0., 0., 1.).unwrap(), 256).unwrap();
        let m = build_disk_map(&p, Point::new(0., 0.)).unwrap();
        for k in 0..40 {
            let z = C::from_polar(0.9 * (k % 5) as f64 / 4.0, k as f64 * 0.7);
            let g = map_forward(&m, z).unwrap();
            assert!((C::from(g) - z).norm() < 5e-3, "{z} -> {g:?}");
        }
        assert!((m.derivative_at_center().re - 1.0).abs() < 1e-3);
    }

    #[test]
    fn square_roundtrip_and_normalization() {
        let p = square(2.0);
        let m = build_disk_map(&p, Point::new(1., 1.)).unwrap();
        assert_eq!(map_forward(&m, C::new(0., 0.)).unwrap(), Point::new(1., 1.));
        let d = m.derivative_at_center();
        assert!(d.im == 0.0 && d.re > 0.0);
        for k in 0..50 {
            let z = C::from_polar(0.95 * ((k * 7) % 11) as f64 / 10.0, k as f64 * 1.3);
            let w = map_forward(&m, z).unwrap();
            assert!(p.contains(w));
            let back = map_inverse(&m, w).unwrap();
            assert!((back - z).norm() < 1e-6, "{z} vs {back}");
        }
        assert!(map_forward(&m, C::new(1.0, 0.0)).is_err());
        assert!(map_inverse(&m, Point::new(3.0, 1.0)).is_err());
    }

    #[test]
    fn node_angles_increase_counterclockwise() {
        let p = square(1.0);
        let m = build_disk_map(&p, Point::new(0.3, 0.6)).unwrap();
        let a = m.node_angles();
        let total: f64 = (0..a.len()).map(|k| gap(a[k], a[(k + 1) % a.len()])).sum();
        assert!((total - TAU).abs() < 1e-9, "{total}");
        assert_eq!(m.vertex_angles().len(), 4);
    }
}
